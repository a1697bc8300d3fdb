pub mod oracle;
pub mod terms;
pub mod snippets;
pub mod policy_oracle;
