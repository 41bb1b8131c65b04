use std::fs;
use std::io::Write;
use std::path::Path;

use tempfile::NamedTempFile;

use crate::exit::Failure;

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), Failure> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let dir = dir.unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir).map_err(|e| Failure::io(dir, e))?;
    let mut tmp = NamedTempFile::new_in(dir).map_err(|e| Failure::io(dir, e))?;
    tmp.write_all(contents).map_err(|e| Failure::io(path, e))?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file()
            .set_permissions(fs::Permissions::from_mode(0o644))
            .map_err(|e| Failure::io(path, e))?;
    }
    tmp.persist(path).map_err(|e| Failure::io(path, e.error))?;
    Ok(())
}

/// CSV number: 16 significant digits, `.` decimal separator.
pub fn num(x: f64) -> String {
    format!("{x:.15e}")
}

/// Builds a CSV document with LF line endings.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut text = header.join(",");
        text.push('\n');
        Self { text }
    }

    pub fn row<I: IntoIterator<Item = String>>(&mut self, fields: I) {
        let fields: Vec<String> = fields.into_iter().collect();
        self.text.push_str(&fields.join(","));
        self.text.push('\n');
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.text.into_bytes()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_keep_sixteen_digits() {
        assert_eq!(num(0.05), "5.000000000000000e-2");
        let x = 1.0 / 3.0;
        let back: f64 = num(x).parse().unwrap();
        assert!((back - x).abs() < 1e-15);
    }

    #[test]
    fn atomic_write_creates_dirs() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a/b/out.txt");
        write_atomic(&path, b"x\n").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "x\n");
        write_atomic(&path, b"y\n").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "y\n");
    }
}
