pub mod bounds;
pub mod cli;
pub mod codes;
pub mod gf2;
pub mod maps;
pub mod oracle;
pub mod params;
pub mod protocol;
pub mod recon1;
pub mod recont;
