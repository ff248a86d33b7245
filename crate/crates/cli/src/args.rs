use std::path::PathBuf;

use admcover_core::ellipticity::{BranchRelation, OneNodeRoute};
use admcover_core::graph_cover::ValidationMode;
use admcover_core::smooth_cover::SearchBounds;
use clap::{Parser, Subcommand, ValueEnum};

const DECIDE_ABOUT: &str = "\
Search for a certificate of (d,h)-ellipticity of an irreducible nodal curve.

Without --map the answer is about existence: whether SOME irreducible curve with
the given normalization genus and number of nodes is (d,h)-elliptic. The search
runs over discrete branch data (ramification profiles and monodromy), so it
cannot tell apart curves with the same invariants. To decide a specific curve,
pass the branch datum of a map from its normalization with --map.";

#[derive(Parser, Debug)]
#[command(
    name = "admcover",
    version,
    about = "Admissible covers of nodal curves and (d,h)-ellipticity"
)]
pub struct Cli {
    /// Monodromy search bounds, e.g. `d=6,branch=8`.
    #[arg(long, global = true, value_parser = parse_bounds, default_value = "d=6,branch=8")]
    pub bounds: SearchBounds,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    /// Graphviz, for commands that produce a curve or a cover.
    Dot,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum Mode {
    Admissible,
    Pseudo,
}

impl From<Mode> for ValidationMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Admissible => ValidationMode::Admissible,
            Mode::Pseudo => ValidationMode::Pseudo,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum GlueMode {
    EqualImages,
    GenusRaise,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum Route {
    SharedFiber,
    TotallyRamified,
}

impl From<Route> for OneNodeRoute {
    fn from(r: Route) -> Self {
        match r {
            Route::SharedFiber => OneNodeRoute::SharedFiber,
            Route::TotallyRamified => OneNodeRoute::TotallyRamified,
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum Relation {
    ConjugatePair,
    TwoWeierstrass,
    WeierstrassAndGeneric,
    GenericPair,
}

impl From<Relation> for BranchRelation {
    fn from(r: Relation) -> Self {
        match r {
            Relation::ConjugatePair => BranchRelation::ConjugatePair,
            Relation::TwoWeierstrass => BranchRelation::TwoWeierstrass,
            Relation::WeierstrassAndGeneric => BranchRelation::WeierstrassAndGeneric,
            Relation::GenericPair => BranchRelation::GenericPair,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a dual graph and report its genus and stability.
    ValidateCurve { file: PathBuf },
    /// Check the admissibility conditions of a cover.
    ValidateCover {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Admissible)]
        mode: Mode,
    },
    /// Complete a cover to a pseudo-admissible one by sprouting rational tails.
    Complete { file: PathBuf },
    /// Contract the unstable rational components of a pseudo-admissible cover.
    ToAdmissible { file: PathBuf },
    /// Replace internal target nodes of an admissible cover by rational bridges.
    ToPseudo { file: PathBuf },
    /// Glue pairs of source legs of a cover.
    Glue {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: GlueMode,
    },
    #[command(long_about = DECIDE_ABOUT)]
    /// Decide (d,h)-ellipticity of an irreducible curve.
    Decide {
        file: PathBuf,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        h: u32,
        /// Branch datum of a map from the normalization, for a specific curve.
        #[arg(long)]
        map: Option<PathBuf>,
        /// For one-node curves, test a single route.
        #[arg(long, value_enum)]
        route: Option<Route>,
    },
    /// Verify an ellipticity certificate against a curve.
    VerifyCert {
        curve: PathBuf,
        certificate: PathBuf,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        h: u32,
    },
    /// Classify a one-node curve with hyperelliptic normalization.
    ClassifyHyperelliptic {
        #[arg(long)]
        genus: u32,
        #[arg(long, value_enum)]
        relation: Relation,
    },
    /// Decide whether a branch datum is realized by a connected cover.
    HurwitzExists { file: PathBuf },
    /// Render a curve or a cover as Graphviz DOT.
    ExportDot { file: PathBuf },
}

fn parse_bounds(s: &str) -> Result<SearchBounds, String> {
    let mut bounds = SearchBounds::default();
    for part in s.split(',').filter(|p| !p.is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got `{part}`"))?;
        let n: usize = value
            .trim()
            .parse()
            .map_err(|_| format!("`{value}` is not a nonnegative integer"))?;
        if n == 0 {
            return Err(format!("bound `{key}` must be positive"));
        }
        match key.trim() {
            "d" | "degree" => bounds.max_degree = n as u32,
            "branch" => bounds.max_branch_points = n,
            other => return Err(format!("unknown bound `{other}`; expected d or branch")),
        }
    }
    Ok(bounds)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_syntax() {
        let b = parse_bounds("d=4,branch=5").unwrap();
        assert_eq!((b.max_degree, b.max_branch_points), (4, 5));
        assert_eq!(parse_bounds("branch=3").unwrap().max_degree, 6);
        assert!(parse_bounds("d=0").is_err());
        assert!(parse_bounds("x=1").is_err());
        assert!(parse_bounds("d").is_err());
    }

    #[test]
    fn cli_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
