//! Run configuration files: `key = value` lines expanded into command-line
//! arguments. The `command` key holds the subcommand words; every other key
//! becomes `--key`, with its value split on whitespace.
//!
//! ```text
//! # geodesic-sphere check
//! command = verify geosphere
//! group = sh3_11
//! s = 1.0
//! seed = 7
//! ```

pub fn expand(text: &str) -> Result<Vec<String>, String> {
    let mut command: Option<Vec<String>> = None;
    let mut rest = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| format!("line {}: expected key = value", n + 1))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(format!("line {}: empty key", n + 1));
        }
        if key == "command" {
            command = Some(value.split_whitespace().map(str::to_string).collect());
            continue;
        }
        rest.push(format!("--{key}"));
        rest.extend(value.split_whitespace().map(str::to_string));
    }
    let mut args = command.ok_or("config has no 'command' key")?;
    args.extend(rest);
    Ok(args)
}

/// Replaces `--config FILE` in the raw arguments by the file's expansion.
pub fn expand_args(args: Vec<String>) -> Result<Vec<String>, String> {
    let Some(pos) = args.iter().position(|a| a == "--config") else {
        return Ok(args);
    };
    let path = args.get(pos + 1).ok_or("--config needs a file")?;
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config '{path}': {e}"))?;
    let mut out: Vec<String> = args[..pos].to_vec();
    out.extend(expand(&text)?);
    out.extend_from_slice(&args[pos + 2..]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expands_command_and_keys() {
        let args = expand("# c\ncommand = verify intertwine\npair = h3_11 h3_20\nrmax = 2\n").unwrap();
        assert_eq!(args, ["verify", "intertwine", "--pair", "h3_11", "h3_20", "--rmax", "2"]);
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(expand("command = scan hopf\nnot a pair\n").is_err());
        assert!(expand("rmax = 2\n").is_err());
    }
}
