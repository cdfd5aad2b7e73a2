use std::io::Write;
use std::path::Path;

use tempfile::NamedTempFile;

use crate::error::CliError;

/// Writes `bytes` to a temporary file beside `path`, then renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let context = || format!("writing {}", path.display());
    let mut tmp = NamedTempFile::new_in(parent).map_err(|e| CliError::io(context(), e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(context(), e))?;
    tmp.as_file().sync_all().map_err(|e| CliError::io(context(), e))?;
    tmp.persist(path).map_err(|e| CliError::io(context(), e.error))?;
    Ok(())
}

/// Sends rendered output to `path`, or to stdout when there is none.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|()| out.flush())
                .map_err(|e| CliError::io("writing stdout", e))
        }
    }
}
