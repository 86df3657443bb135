//! Preset scenarios reproducing the standard plots.
//!
//! All presets use κ_a = κ_b = 1, N = 100 and the interaction picture, so
//! times are in units of 1/κ. Dissipative presets use NΓ/κ = 10.

use crate::error::{Error, Result};
use crate::operators::{Picture, SpinMode, SystemParams};
use crate::scenario::{run, InitialState, OutputKind, ScenarioConfig, SpaceSpec, TimeGrid};

pub const FIGURES: [&str; 7] = ["fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"];

const N_ATOMS: usize = 100;
const GAMMA: f64 = 0.1;
const THERMAL_N_BAR: f64 = 0.3;
const THERMAL_CUTOFF: usize = 3;

fn params(gamma: f64) -> SystemParams {
    SystemParams::symmetric(1.0e4, 1.0, N_ATOMS).with_decay(gamma)
}

fn basis(atom_exc: usize, n_a: usize, n_b: usize) -> InitialState {
    InitialState::Basis { atom_exc, n_a, n_b }
}

fn config(
    name: &str,
    gamma: f64,
    initial: InitialState,
    space: SpaceSpec,
    t_end: f64,
    outputs: &[OutputKind],
) -> ScenarioConfig {
    ScenarioConfig {
        name: Some(name.to_string()),
        mode: SpinMode::Exact,
        picture: Picture::Interaction,
        params: params(gamma),
        cantilever_damping: false,
        initial,
        space,
        times: TimeGrid { t_end, samples: 401 },
        outputs: outputs.to_vec(),
        tol: 1e-12,
        notes: Vec::new(),
        generator: None,
    }
}

/// Configs behind one figure.
pub fn figure_configs(name: &str) -> Result<Vec<ScenarioConfig>> {
    use OutputKind::*;
    let manifold = |n| SpaceSpec::Manifold { atom_cap: 1, n };
    let bounded = |max| SpaceSpec::Bounded { atom_cap: 1, max };
    let thermal = InitialState::Thermal { n_bar: THERMAL_N_BAR, cutoff: THERMAL_CUTOFF };
    let dissipative_note = "NΓ/κ = 10 with N = 100, Γ = 0.1κ".to_string();
    let configs = match name {
        "fig2" => vec![
            config("fig2_g10", 0.0, basis(0, 1, 0), manifold(1), 10.0, &[Populations]),
            config("fig2_e00", 0.0, basis(1, 0, 0), manifold(1), 10.0, &[Populations]),
        ],
        "fig3" => vec![config("fig3_g30", 0.0, basis(0, 3, 0), manifold(3), 10.0, &[Populations])],
        "fig4" => vec![config("fig4_g10", GAMMA, basis(0, 1, 0), bounded(1), 40.0, &[Populations])],
        "fig5" => vec![config("fig5_g02", GAMMA, basis(0, 0, 2), bounded(2), 40.0, &[Populations])],
        "fig6" => vec![config("fig6_thermal", GAMMA, thermal, bounded(THERMAL_CUTOFF), 40.0, &[
            Populations,
            DarkPopulations,
            Negativity,
        ])],
        "fig7" => vec![
            config("fig7_g10", 0.0, basis(0, 1, 0), manifold(1), 10.0, &[Negativity]),
            config("fig7_e00", 0.0, basis(1, 0, 0), manifold(1), 10.0, &[Negativity]),
            config("fig7_g20", 0.0, basis(0, 2, 0), manifold(2), 10.0, &[Negativity]),
            config("fig7_g30", 0.0, basis(0, 3, 0), manifold(3), 10.0, &[Negativity]),
        ],
        "fig8" => vec![config("fig8_thermal", 0.0, thermal, bounded(THERMAL_CUTOFF), 10.0, &[Negativity])],
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown figure `{other}`; expected one of {}",
                FIGURES.join(", ")
            )))
        }
    };
    Ok(configs
        .into_iter()
        .map(|mut c| {
            if c.params.gamma_atom > 0.0 {
                c.notes.push(dissipative_note.clone());
            }
            c
        })
        .collect())
}

/// Matplotlib script plotting every data column of the figure's CSVs.
pub fn plot_script(name: &str, csv_files: &[String]) -> String {
    let files = csv_files.iter().map(|f| format!("    \"{f}\",")).collect::<Vec<_>>().join("\n");
    format!(
        r#"import csv
import matplotlib.pyplot as plt

FILES = [
{files}
]

fig, axes = plt.subplots(len(FILES), 1, figsize=(6, 3 * len(FILES)), squeeze=False)
for ax, path in zip(axes[:, 0], FILES):
    with open(path) as f:
        rows = list(csv.DictReader(f))
    t = [float(r["t"]) for r in rows]
    for col in rows[0]:
        if col == "t" or col.startswith(("re_", "im_")):
            continue
        ax.plot(t, [float(r[col]) for r in rows], label=col)
    ax.set_xlabel("kappa t")
    ax.set_title(path)
    ax.legend(fontsize="small")
fig.tight_layout()
fig.savefig("{name}.png", dpi=150)
"#
    )
}

/// Every output file of a figure: CSVs, config sidecars and the plot script.
pub fn render(name: &str) -> Result<Vec<(String, String)>> {
    let mut files = Vec::new();
    for c in figure_configs(name)? {
        files.extend(run(&c)?.files);
    }
    let csvs: Vec<String> = files.iter().map(|(n, _)| n.clone()).filter(|n| n.ends_with(".csv")).collect();
    files.push((format!("{name}.py"), plot_script(name, &csvs)));
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_validate() {
        for name in FIGURES {
            let configs = figure_configs(name).unwrap();
            assert!(!configs.is_empty());
            for c in configs {
                c.validate().unwrap();
                assert!(c.stem().starts_with(name));
            }
        }
    }

    #[test]
    fn unknown_name() {
        let err = figure_configs("fig9").unwrap_err();
        assert!(err.to_string().contains("fig2"));
    }

    #[test]
    fn fig2_renders() {
        let files = render("fig2").unwrap();
        let names: Vec<&str> = files.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, ["fig2_g10_populations.csv", "fig2_g10.json", "fig2_e00_populations.csv", "fig2_e00.json", "fig2.py"]);
        let csv = &files[0].1;
        assert_eq!(csv.lines().count(), 402);
        assert!(files[4].1.contains("fig2_e00_populations.csv"));
    }
}
