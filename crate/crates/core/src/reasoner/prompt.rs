const SYSTEM_PROMPT: &str = include_str!("../../resources/system_prompt.txt");

/// The reasoner's system prompt, byte-for-byte as bundled.
pub fn render_system_prompt() -> &'static str {
    SYSTEM_PROMPT
}
