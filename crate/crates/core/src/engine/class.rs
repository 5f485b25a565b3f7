//! Class specifications: proxy, carrier field, seeds and base excluded minors.

use std::path::Path;

use serde::Deserialize;

use super::record::MemberRecord;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linrep::is_confined;
use crate::matroid::catalog;
use crate::pfield::{find_proxy, PartialFieldPresentation, Proxy, DEFAULT_BOUND, DEFAULT_PRIME_CEILING};

const DYADIC: &str = r#"
name = "dyadic"
pf = "D"
proxy = "pf=D q=11 images=2=2 F=2,6,10"
carrier = 3
carrier_threshold = 8
seeds = ["F7-", "F7-*", "P8"]
base_excluded = ["U2,5", "U3,5", "F7", "F7*", "AG23-e", "AG23-e*", "AG23-e-DY"]
"#;

const TWO_REGULAR: &str = r#"
name = "2regular"
pf = "U2"
proxy = "pf=U2 q=211 images=alpha=4,beta=44 F=4,11,21,24,38,44,50,53,55,57,60,70,94,96,102,110,116,118,142,152,155,157,159,162,168,174,188,191,201,208"
carrier = 4
carrier_threshold = 9
seeds = ["U2,5", "U3,5"]
base_excluded = [
    "U2,6", "U3,6", "U4,6", "P6", "F7", "F7*", "F7-", "F7-*", "F7=", "F7=*",
    "AG23-e", "AG23-e*", "AG23-e-DY", "P8", "P8-", "P8=", "TQ8",
]
"#;

pub const BUILTIN_CLASSES: [&str; 2] = ["dyadic", "2regular"];

/// The config stanza as written in a file.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassConfig {
    pub name: String,
    pub pf: String,
    /// A proxy stanza; when absent the proxy is searched for.
    #[serde(default)]
    pub proxy: Option<String>,
    pub carrier: u32,
    pub carrier_threshold: usize,
    pub seeds: Vec<String>,
    pub base_excluded: Vec<String>,
}

/// A seed of the generation: a catalog name with both representations.
#[derive(Clone, Debug)]
pub struct Seed {
    pub name: String,
    pub record: MemberRecord,
}

#[derive(Clone, Debug)]
pub struct ClassSpec {
    pub name: String,
    /// Name or config path of the partial field presentation.
    pub pf: String,
    pub proxy: Proxy,
    pub carrier: FieldSpec,
    pub carrier_threshold: usize,
    pub seeds: Vec<Seed>,
    pub base_excluded: Vec<String>,
}

impl ClassSpec {
    pub fn builtin(name: &str) -> Result<ClassSpec> {
        match name {
            "dyadic" => ClassSpec::from_toml_str(DYADIC),
            "2regular" | "2-regular" => ClassSpec::from_toml_str(TWO_REGULAR),
            _ => Err(Error::UnknownName(format!("class {name}"))),
        }
    }

    /// A built-in class name, or a path to a TOML stanza.
    pub fn resolve(name_or_path: &str) -> Result<ClassSpec> {
        ClassSpec::resolve_with(name_or_path, DEFAULT_PRIME_CEILING)
    }

    /// As `resolve`; a config without a proxy stanza searches primes up to
    /// `prime_ceiling`.
    pub fn resolve_with(name_or_path: &str, prime_ceiling: u32) -> Result<ClassSpec> {
        if BUILTIN_CLASSES.contains(&name_or_path) || name_or_path == "2-regular" {
            return ClassSpec::builtin(name_or_path);
        }
        let path = Path::new(name_or_path);
        let src = std::fs::read_to_string(path).map_err(Error::io(path))?;
        let cfg: ClassConfig = toml::from_str(&src).map_err(|e| Error::Parse(format!("class config: {e}")))?;
        ClassSpec::from_config_with(cfg, prime_ceiling)
    }

    pub fn from_toml_str(src: &str) -> Result<ClassSpec> {
        let cfg: ClassConfig = toml::from_str(src).map_err(|e| Error::Parse(format!("class config: {e}")))?;
        ClassSpec::from_config(cfg)
    }

    pub fn from_config(cfg: ClassConfig) -> Result<ClassSpec> {
        ClassSpec::from_config_with(cfg, DEFAULT_PRIME_CEILING)
    }

    pub fn from_config_with(cfg: ClassConfig, prime_ceiling: u32) -> Result<ClassSpec> {
        let proxy = match &cfg.proxy {
            Some(stanza) => Proxy::parse_stanza(stanza)?,
            None => {
                let pf = PartialFieldPresentation::resolve(&cfg.pf)?;
                find_proxy(&pf, &pf.fundamentals(DEFAULT_BOUND), prime_ceiling)?
            }
        };
        if proxy.pf_name != cfg.pf {
            return Err(Error::Precondition(format!("proxy is for {}, class uses {}", proxy.pf_name, cfg.pf)));
        }
        let carrier = FieldSpec::new(cfg.carrier)?;
        if !matches!(cfg.carrier, 3 | 4) {
            return Err(Error::Precondition(format!("carrier GF({}) must be GF(3) or GF(4)", cfg.carrier)));
        }
        let mut seeds = Vec::new();
        for name in &cfg.seeds {
            let m = catalog::get(name)?;
            let record = MemberRecord::from_matroid(&m, &proxy, &carrier)
                .ok_or_else(|| Error::Precondition(format!("seed {name} has no confined representation")))?;
            seeds.push(Seed { name: name.clone(), record });
        }
        if seeds.is_empty() {
            return Err(Error::Precondition("a class needs at least one seed".into()));
        }
        for name in &cfg.base_excluded {
            catalog::get(name)?;
        }
        let spec = ClassSpec {
            name: cfg.name,
            pf: cfg.pf,
            proxy,
            carrier,
            carrier_threshold: cfg.carrier_threshold,
            seeds,
            base_excluded: cfg.base_excluded,
        };
        spec.check_seeds()?;
        Ok(spec)
    }

    fn check_seeds(&self) -> Result<()> {
        for s in &self.seeds {
            if !is_confined(&s.record.confined, self.proxy.allowed_table()) {
                return Err(Error::Precondition(format!("seed {} is not confined", s.name)));
            }
            s.record.check()?;
            let dual = s.record.matroid.dual();
            if !self.seeds.iter().any(|t| t.record.matroid.is_isomorphic(&dual)) {
                return Err(Error::Precondition(format!("seed set is not closed under duality at {}", s.name)));
            }
        }
        Ok(())
    }

    /// Size of the smallest seed.
    pub fn n0(&self) -> usize {
        self.seeds.iter().map(|s| s.record.matroid.n()).min().unwrap_or(0)
    }

    pub fn base_excluded_matroids(&self) -> Result<Vec<(String, crate::matroid::BasisMatroid)>> {
        self.base_excluded.iter().map(|n| Ok((n.clone(), catalog::get(n)?))).collect()
    }

    pub fn stanza(&self) -> String {
        let list = |v: &[String]| v.iter().map(|s| format!("{s:?}")).collect::<Vec<_>>().join(", ");
        let seeds: Vec<String> = self.seeds.iter().map(|s| s.name.clone()).collect();
        format!(
            "name = {:?}\npf = {:?}\nproxy = {:?}\ncarrier = {}\ncarrier_threshold = {}\nseeds = [{}]\nbase_excluded = [{}]\n",
            self.name,
            self.pf,
            self.proxy.stanza(),
            self.carrier.order(),
            self.carrier_threshold,
            list(&seeds),
            list(&self.base_excluded)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_load() {
        let d = ClassSpec::builtin("dyadic").unwrap();
        assert_eq!(d.n0(), 7);
        assert_eq!(d.proxy.f, vec![2, 6, 10]);
        let t = ClassSpec::builtin("2regular").unwrap();
        assert_eq!(t.n0(), 5);
        assert_eq!(t.proxy.f.len(), 30);
        assert_eq!(t.base_excluded.len(), 17);
        let again = ClassSpec::from_toml_str(&d.stanza()).unwrap();
        assert_eq!(again.stanza(), d.stanza());
        assert!(ClassSpec::builtin("ternary").is_err());
    }
}
