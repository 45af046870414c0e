use std::io::IsTerminal;

/// ANSI styling for terminal output; off when stdout is not a terminal or
/// `VRT_NO_COLOR` is set.
#[derive(Debug, Clone, Copy)]
pub struct Painter {
    enabled: bool,
}

impl Painter {
    pub fn detect() -> Self {
        let enabled = std::env::var_os("VRT_NO_COLOR").is_none() && std::io::stdout().is_terminal();
        Self { enabled }
    }

    pub fn plain() -> Self {
        Self { enabled: false }
    }

    fn wrap(&self, code: &str, text: &str) -> String {
        if self.enabled {
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }

    pub fn bold(&self, text: &str) -> String {
        self.wrap("1", text)
    }

    pub fn good(&self, text: &str) -> String {
        self.wrap("32", text)
    }

    pub fn warn(&self, text: &str) -> String {
        self.wrap("33", text)
    }

    pub fn bad(&self, text: &str) -> String {
        self.wrap("1;31", text)
    }
}
