use std::fs;
use std::path::Path;

use minorforge::engine::{
    catalog_name, ch_hunt, counts_report, counts_tsv, delta_dual_closure, excluded_minors, generate_level,
    verify_base_excluded, ClassSpec, EngineConfig, FilterConfig, LevelStore,
};
use minorforge::field::{primes_between, FieldSpec};
use minorforge::linrep::{ExtensionContext, ExtensionMode, LinearRep};
use minorforge::matroid::{catalog, delta_y_closure, has_minor_iso, BasisMatroid, MinorCache};
use minorforge::pfield::{field_verdict, find_proxy, verify_proxy, FieldVerdict, PartialFieldPresentation};

use crate::{CatalogCommand, Cli, Command, EngineArgs, Failure, ProxyCommand, VERSION};

type Outcome = Result<(), Failure>;

fn domain(msg: impl Into<String>) -> Failure {
    Failure::Domain(msg.into())
}

/// Sends `log` output to a fresh file under `<store>/log/` and records the
/// resolved invocation there.
fn start_log(store: &Path, cli: &Cli, tag: &str) -> Outcome {
    let (path, file) = LevelStore::log_file(store, tag)?;
    let level = if cli.verbose { log::LevelFilter::Debug } else { log::LevelFilter::Info };
    env_logger::Builder::new()
        .filter_level(level)
        .target(env_logger::Target::Pipe(Box::new(file)))
        .try_init()
        .map_err(|e| domain(format!("logger: {e}")))?;
    log::info!("minorforge {VERSION}");
    log::info!("argv: {:?}", std::env::args().collect::<Vec<_>>());
    log::info!("store: {}", store.display());
    log::info!("log: {}", path.display());
    log::info!("threads: {}", rayon::current_num_threads());
    log::info!("command: {:?}", cli.command);
    Ok(())
}

fn tag(cmd: &Command) -> &'static str {
    match cmd {
        Command::Proxy(_) => "proxy",
        Command::Generate { .. } => "generate",
        Command::Excluded { .. } => "excluded",
        Command::Counts { .. } => "counts",
        Command::Catalog(_) => "catalog",
        Command::Iso { .. } => "iso",
        Command::Minor { .. } => "minor",
        Command::Deltay { .. } => "deltay",
        Command::Chhunt { .. } => "chhunt",
        Command::VerifyBase { .. } => "verify-base",
    }
}

fn needs_store(cmd: &Command) -> bool {
    matches!(cmd, Command::Generate { .. } | Command::Excluded { .. } | Command::Counts { .. } | Command::Chhunt { .. })
}

pub fn run(cli: &Cli) -> Outcome {
    let store = cli.store.as_deref();
    match store {
        Some(s) => start_log(s, cli, tag(&cli.command))?,
        None if needs_store(&cli.command) => {
            return Err(Failure::Usage("this command needs --store DIR or MINORFORGE_STORE".into()))
        }
        None => {}
    }
    let store_root = || store.map(Path::to_path_buf).expect("checked above");
    match &cli.command {
        Command::Proxy(p) => proxy(p),
        Command::Generate { engine, max_n } => generate(&store_root(), engine, *max_n),
        Command::Excluded { engine, max_n } => excluded(&store_root(), engine, *max_n),
        Command::Counts { class } => counts(&store_root(), class),
        Command::Catalog(c) => catalog_cmd(c),
        Command::Iso { a, b } => iso(a, b),
        Command::Minor { m, minor } => minor_cmd(m, minor),
        Command::Deltay { m, no_duals } => deltay(m, !no_duals),
        Command::Chhunt { class, n } => chhunt(&store_root(), class, *n),
        Command::VerifyBase { class } => verify_base(class),
    }
}

fn proxy(cmd: &ProxyCommand) -> Outcome {
    match cmd {
        ProxyCommand::Find { pf, prime_ceiling, bound, explain } => {
            let pres = PartialFieldPresentation::resolve(pf)?;
            let fund = pres.fundamentals(*bound);
            let found = find_proxy(&pres, &fund, *prime_ceiling)?;
            if *explain {
                for p in primes_between(2, found.field.order() - 1) {
                    let field = FieldSpec::new(p)?;
                    match field_verdict(&pres, &fund, &field) {
                        FieldVerdict::Rejected { tuples, first: Some((t, why)) } => {
                            let t: Vec<String> = t.iter().map(|x| x.to_string()).collect();
                            emit!("# GF({p}): {tuples} image tuples rejected; first ({}): {why}", t.join(","));
                        }
                        FieldVerdict::Rejected { first: None, .. } => emit!("# GF({p}): no image tuples"),
                        FieldVerdict::Proxy(x) => return Err(domain(format!("search skipped {}", x.stanza()))),
                    }
                }
            }
            log::info!("found {}", found.stanza());
            emit!("{}", found.stanza());
            Ok(())
        }
        ProxyCommand::Verify { pf, q, images, bound } => {
            let pres = PartialFieldPresentation::resolve(pf)?;
            let fund = pres.fundamentals(*bound);
            let field = FieldSpec::new(*q)?;
            match verify_proxy(&pres, &fund, &field, images) {
                Ok(p) => {
                    emit!("{}", p.stanza());
                    Ok(())
                }
                Err(v) => {
                    emit!("rejected GF({q}): {v}");
                    Err(domain(format!("GF({q}) with images {images:?} is not a proxy for {pf}")))
                }
            }
        }
    }
}

fn open_class(store: &Path, engine: &EngineArgs) -> Result<(ClassSpec, LevelStore, EngineConfig), Failure> {
    let class = ClassSpec::resolve_with(&engine.class, engine.prime_ceiling)?;
    log::info!("class config:\n{}", class.stanza());
    let mode = if engine.fast_confinement { ExtensionMode::Fast } else { ExtensionMode::Exact };
    if engine.fast_confinement {
        gate_fast_confinement(&class)?;
    }
    let cfg = EngineConfig { filter: FilterConfig { groups: engine.groups, batch_size: engine.batch_size }, mode };
    log::info!("engine: {cfg:?}");
    let ls = LevelStore::open(store, &class.name)?;
    Ok((class, ls, cfg))
}

/// Refuses fast confinement unless it agrees with the exact test on every
/// seed of the class.
fn gate_fast_confinement(class: &ClassSpec) -> Outcome {
    for s in &class.seeds {
        let ctx = ExtensionContext::new(&s.record.confined, Some(class.proxy.allowed_table()));
        if ctx.confined_simple_extensions(ExtensionMode::Fast) != ctx.confined_simple_extensions(ExtensionMode::Exact) {
            return Err(domain(format!("fast confinement disagrees with the exact test on seed {}", s.name)));
        }
    }
    log::info!("fast confinement agrees with the exact test on all seeds");
    Ok(())
}

/// Generates or verifies levels `n0..=max_n`, printing one line per level.
fn ensure_levels(class: &ClassSpec, ls: &LevelStore, cfg: &EngineConfig, max_n: usize) -> Outcome {
    for n in class.n0()..=max_n {
        let (count, status) = if ls.is_complete(n) {
            (ls.read_level(&class.name, n)?.len(), "verified")
        } else {
            (generate_level(class, n, ls, cfg)?, "generated")
        };
        emit!("level\t{n}\t{count}\t{status}");
    }
    Ok(())
}

fn generate(store: &Path, engine: &EngineArgs, max_n: usize) -> Outcome {
    let (class, ls, cfg) = open_class(store, engine)?;
    ensure_levels(&class, &ls, &cfg, max_n)?;
    let counts = counts_report(&class.name, &ls)?;
    emit!("{}", counts_tsv(&counts).trim_end());
    Ok(())
}

fn describe(m: &BasisMatroid) -> String {
    let name = catalog_name(m).unwrap_or_else(|| "-".into());
    let self_dual = if m.is_isomorphic(&m.dual()) { "self-dual" } else { "-" };
    let delta = delta_dual_closure(std::slice::from_ref(m)).len();
    format!("{name}\tr={}\tchs={}\tdelta={delta}\t{self_dual}\t{}", m.rank(), m.circuit_hyperplanes().len(), m.serialize())
}

fn excluded(store: &Path, engine: &EngineArgs, max_n: usize) -> Outcome {
    let (class, ls, cfg) = open_class(store, engine)?;
    let report = excluded_minors(&class, max_n, &ls, &cfg)?;
    for b in &report.base {
        let m = catalog::get(&b.name)?;
        let status = if b.passed() { "ok" } else { "FAILED" };
        emit!("base\t{}\tn={}\tr={}\t{status}", b.name, m.n(), m.rank());
    }
    for (n, found) in &report.sieved {
        if found.is_empty() {
            emit!("sieve\tn={n}\tnone");
        }
        for m in found {
            emit!("sieve\tn={n}\t{}", describe(m));
        }
    }
    if !report.base_ok() {
        return Err(domain("base list verification failed"));
    }
    Ok(())
}

fn counts(store: &Path, class: &str) -> Outcome {
    let name = ClassSpec::resolve(class)?.name;
    let ls = LevelStore::open(store, &name)?;
    let counts = counts_report(&name, &ls)?;
    if counts.is_empty() {
        return Err(domain(format!("no complete levels for {name} in {}", store.display())));
    }
    emit!("{}", counts_tsv(&counts).trim_end());
    Ok(())
}

/// A matroid given as a catalog name, a `B …` or `L …` line, or a file
/// holding one of those.
fn load_matroid(arg: &str) -> Result<BasisMatroid, Failure> {
    let text = if Path::new(arg).is_file() {
        fs::read_to_string(arg).map_err(|e| domain(format!("{arg}: {e}")))?
    } else {
        arg.to_string()
    };
    let text = text.trim();
    if text.starts_with("B ") {
        Ok(BasisMatroid::parse(text)?)
    } else if text.starts_with("L ") {
        Ok(LinearRep::parse(text)?.matroid())
    } else {
        Ok(catalog::get(text)?)
    }
}

fn catalog_cmd(cmd: &CatalogCommand) -> Outcome {
    match cmd {
        CatalogCommand::List => {
            for &name in catalog::NAMES {
                let m = catalog::get(name)?;
                emit!("{name}\tn={}\tr={}", m.n(), m.rank());
            }
            Ok(())
        }
        CatalogCommand::Show { name } => {
            let m = catalog::get(name)?;
            let p = m.predicates();
            emit!("name\t{name}");
            emit!("n\t{}", m.n());
            emit!("rank\t{}", m.rank());
            emit!("bases\t{}", m.basis_count());
            emit!("simple\t{}", p.simple);
            emit!("cosimple\t{}", p.cosimple);
            emit!("3-connected\t{}", p.three_connected);
            emit!("self-dual\t{}", m.is_isomorphic(&m.dual()));
            emit!("circuit-hyperplanes\t{}", m.circuit_hyperplanes().len());
            if let Some(rep) = catalog::representation(name) {
                emit!("representation\t{}", rep.serialize());
            }
            emit!("bases-bitmap\t{}", m.serialize());
            Ok(())
        }
    }
}

fn iso(a: &str, b: &str) -> Outcome {
    let (ma, mb) = (load_matroid(a)?, load_matroid(b)?);
    match ma.isomorphism(&mb) {
        Some(perm) => {
            let map: Vec<String> = perm.iter().enumerate().map(|(i, j)| format!("{i}->{j}")).collect();
            emit!("isomorphic\t{}", map.join(" "));
        }
        None => emit!("not isomorphic"),
    }
    Ok(())
}

fn minor_cmd(m: &str, n: &str) -> Outcome {
    let (mm, nn) = (load_matroid(m)?, load_matroid(n)?);
    let yes = has_minor_iso(&mm, &nn, &MinorCache::new());
    emit!("{}", if yes { "minor" } else { "not a minor" });
    Ok(())
}

fn deltay(m: &str, with_duals: bool) -> Outcome {
    let m = load_matroid(m)?;
    let class = delta_y_closure(&m, with_duals);
    emit!("size\t{}", class.len());
    for x in &class {
        emit!("{}\t{}", catalog_name(x).unwrap_or_else(|| "-".into()), x.serialize());
    }
    Ok(())
}

fn chhunt(store: &Path, class: &str, n: usize) -> Outcome {
    let class = ClassSpec::resolve(class)?;
    log::info!("class config:\n{}", class.stanza());
    let ls = LevelStore::open(store, &class.name)?;
    let mut known: Vec<BasisMatroid> = class.base_excluded_matroids()?.into_iter().map(|(_, m)| m).collect();
    for k in class.n0()..=n {
        if let Some(found) = ls.read_excluded(k)? {
            known.extend(found);
        }
    }
    let report = ch_hunt(&class, n, &known, &ls, &MinorCache::new())?;
    emit!("selected\t{}", report.selected);
    emit!("with-qualifying-extension\t{}", report.with_qualifying);
    emit!("candidates\t{}", report.candidates);
    emit!("members\t{}", report.members);
    emit!("with-known-minor\t{}", report.with_known_minor);
    emit!("survivors\t{}", report.survivors.len());
    for m in &report.survivors {
        emit!("survivor\t{}", describe(m));
    }
    Ok(())
}

fn verify_base(class: &str) -> Outcome {
    let class = ClassSpec::resolve(class)?;
    let checks = verify_base_excluded(&class)?;
    for b in &checks {
        let membership = if b.outside { "outside" } else { "MEMBER" };
        let status = if b.passed() { "ok" } else { "FAILED" };
        emit!("{}\t{membership}\t{status}\t{}", b.name, b.failing_minors.join(","));
    }
    if checks.iter().all(|b| b.passed()) {
        Ok(())
    } else {
        Err(domain("some base matroids are not excluded minors"))
    }
}
