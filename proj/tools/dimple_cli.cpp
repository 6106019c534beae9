#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dimple/bound_spectrum.hpp"
#include "dimple/delta_limit.hpp"
#include "dimple/jwkb.hpp"
#include "dimple/scattering.hpp"
#include "dimple/sudden_transitions.hpp"
#include "dimple/sweep_table.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitDegraded = 3;

struct GlobalOpts {
  std::string preset;
  std::string out_path;
  bool json = false;
  double tol = 0.0;  // 0 = module defaults
  bool allow_degraded = false;
};

dimple::RootSpec root_spec(const GlobalOpts& g) {
  dimple::RootSpec spec;
  if (g.tol > 0.0) spec.root_tolerance = g.tol;
  return spec;
}

std::vector<double> parse_grid(const std::string& text) {
  double lo = 0.0, hi = 0.0;
  int steps = 0;
  char c1 = 0, c2 = 0;
  std::istringstream is(text);
  if (!(is >> lo >> c1 >> hi >> c2 >> steps) || c1 != ':' || c2 != ':' || steps < 1 || hi < lo)
    throw CLI::ValidationError("grid", "expected lo:hi:steps with steps >= 1");
  std::vector<double> grid;
  for (int i = 0; i <= steps; ++i) grid.push_back(lo + (hi - lo) * i / steps);
  return grid;
}

void emit(const dimple::SweepTable& table, const GlobalOpts& g, const std::string& command) {
  dimple::SweepTable t = table;
  t.add_meta("tool_version", kVersion);
  t.add_meta("command", command);
  std::time_t now = std::time(nullptr);
  char stamp[64];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  t.add_meta("generated_at", stamp);

  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!g.out_path.empty()) {
    file.open(g.out_path);
    if (!file) throw std::runtime_error("cannot open output file: " + g.out_path);
    os = &file;
  }
  if (g.json) {
    nlohmann::json j;
    for (const auto& [k, v] : t.metadata) j["metadata"][k] = v;
    j["rows"] = nlohmann::json::array();
    for (const auto& row : t.rows) {
      nlohmann::json obj;
      for (size_t i = 0; i < row.size() && i < t.columns.size(); ++i)
        obj[t.columns[i]] = row[i];
      j["rows"].push_back(obj);
    }
    *os << j.dump(2) << "\n";
  } else {
    t.write_csv(*os);
  }
}

struct TrapOpts {
  double omega = 1.0;
  double a = 3.0;
  double u0 = 10.0;
  double hbar = 1.0;
  double mass = 0.5;
  bool si = false;
  double e_max = 10.25;  // units of hbar omega
};

void add_trap_flags(CLI::App* cmd, TrapOpts& o) {
  cmd->add_option("--omega", o.omega, "trap frequency");
  cmd->add_option("--a", o.a, "dimple half-width");
  cmd->add_option("--u0", o.u0, "dimple depth");
  cmd->add_option("--hbar", o.hbar, "hbar (SI runs)");
  cmd->add_option("--mass", o.mass, "particle mass");
  cmd->add_flag("--si", o.si, "treat parameters as SI values");
  cmd->add_option("--e-max", o.e_max, "spectrum cutoff in units of hbar*omega");
}

dimple::TrapParams trap_params(const TrapOpts& o, const GlobalOpts& g) {
  if (g.preset == "table1")
    return dimple::TrapParams::natural(1.0, 3.0, 10.0);
  if (g.preset == "table2") {
    dimple::TrapParams p;
    p.hbar = 1.054571817e-34;
    p.m = 23.0 * 1.66053906660e-27;
    p.omega = 2.0 * M_PI * 20.0;
    p.a = 11e-6;
    p.U0 = 1e-30;
    p.unit_preset = dimple::UnitPreset::si;
    return p;
  }
  if (!g.preset.empty()) throw CLI::ValidationError("--preset", "unknown preset " + g.preset);
  if (o.si) {
    dimple::TrapParams p{o.hbar, o.mass, o.omega, o.a, o.u0, dimple::UnitPreset::si};
    return p;
  }
  return dimple::TrapParams::natural(o.omega, o.a, o.u0);
}

double default_e_max(const GlobalOpts& g, const TrapOpts& o) {
  if (g.preset == "table1") return 10.25;
  if (g.preset == "table2") return 14.0;
  return o.e_max;
}

bool table_has_degraded(const dimple::SweepTable& t) {
  if (t.columns.empty() || t.columns.back() != "flag") return false;
  for (const auto& row : t.rows)
    if (!row.empty() && row.back() != "ok") return true;
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"truncated-parabolic dimple trap toolkit"};
  app.require_subcommand(1);
  GlobalOpts g;
  app.add_option("--preset", g.preset, "named parameter preset")->configurable(false);
  app.add_option("--out", g.out_path, "output file (default stdout)");
  app.add_flag("--json", g.json, "emit JSON instead of CSV");
  app.add_option("--tol", g.tol, "root-finder tolerance override");
  app.add_flag("--allow-degraded", g.allow_degraded, "exit 0 even on degraded rows");

  TrapOpts trap;
  std::string method = "analytic";
  auto* spectrum = app.add_subcommand("spectrum", "bound spectrum of the dimple trap")->fallthrough();
  add_trap_flags(spectrum, trap);
  spectrum->add_option("--method", method, "analytic|jwkb|both");

  TrapOpts jtrap;
  auto* jwkb = app.add_subcommand("jwkb", "JWKB vs analytic eigenvalue comparison")->fallthrough();
  add_trap_flags(jwkb, jtrap);

  TrapOpts ttrap;
  int t_n = 0, t_target = 0;
  std::string u0_grid = "0:20:40";
  auto* transitions = app.add_subcommand("transitions", "sudden-approximation probabilities")->fallthrough();
  add_trap_flags(transitions, ttrap);
  transitions->add_option("--n", t_n, "initial bare-trap quantum number");
  transitions->add_option("--target", t_target, "dimple-spectrum target index");
  transitions->add_option("--u0-grid", u0_grid, "depth grid lo:hi:steps");

  auto* figures = app.add_subcommand("figures", "figure-data presets fig1..fig5")->fallthrough();

  double dl_c = 1.0, dl_a_start = 0.25, dl_E = 1.0;
  int dl_halvings = 6, dl_levels = 4;
  auto* delta = app.add_subcommand("delta-limit", "a -> 0 convergence studies")->fallthrough();
  delta->add_option("--c", dl_c, "held-fixed product U0*a");
  delta->add_option("--a-start", dl_a_start, "largest half-width");
  delta->add_option("--halvings", dl_halvings, "number of times a is halved");
  delta->add_option("--levels", dl_levels, "levels tracked per parity");
  delta->add_option("--energy", dl_E, "scattering energy for the |T - T_delta| column");

  std::string sc_vary = "E", sc_grid = "0.5:50:99", sc_fixed_json, sc_method = "closed_form";
  auto* scatter = app.add_subcommand("scatter", "reflection/transmission sweeps")->fallthrough();
  scatter->add_option("--vary", sc_vary, "E|a|U0");
  scatter->add_option("--grid", sc_grid, "grid lo:hi:steps");
  scatter->add_option("--fixed", sc_fixed_json, "fixed parameters as JSON, e.g. {\"E\":1}");
  scatter->add_option("--method", sc_method, "closed_form|linear_solve");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    dimple::RootSpec spec = root_spec(g);
    bool degraded = false;
    std::string cmdline;
    for (int i = 1; i < argc; ++i) cmdline += std::string(i > 1 ? " " : "") + argv[i];

    if (spectrum->parsed()) {
      dimple::TrapParams p = trap_params(trap, g);
      double e_max = default_e_max(g, trap) * p.hbar * p.omega;
      dimple::SweepTable t;
      if (method == "analytic") {
        dimple::Spectrum sp = dimple::solve_spectrum(p, e_max, spec);
        t = dimple::spectrum_table(sp);
        degraded = !sp.gaps.empty();
      } else if (method == "jwkb" || method == "both") {
        t = dimple::compare_spectra(p, e_max, spec);
        if (method == "jwkb") {
          // keep only the JWKB column
          dimple::SweepTable j;
          j.columns = {"n", "jwkb"};
          j.metadata = t.metadata;
          for (const auto& row : t.rows) {
            auto& r = j.add_row();
            r.push_back(row[0]);
            r.push_back(row[2]);
          }
          t = j;
        }
      } else {
        std::cerr << "spectrum: unknown --method " << method << "\n";
        return kExitUsage;
      }
      emit(t, g, cmdline);
    } else if (jwkb->parsed()) {
      dimple::TrapParams p = trap_params(jtrap, g);
      double e_max = default_e_max(g, jtrap) * p.hbar * p.omega;
      emit(dimple::compare_spectra(p, e_max, spec), g, cmdline);
    } else if (transitions->parsed()) {
      if (g.preset == "fig1") {
        t_n = 0;
        t_target = 0;
      } else if (g.preset == "fig2") {
        t_n = 2;
        t_target = 0;
      } else if (!g.preset.empty() && g.preset != "table1") {
        std::cerr << "transitions: unsupported preset " << g.preset << "\n";
        return kExitUsage;
      }
      dimple::TrapParams base = dimple::TrapParams::natural(ttrap.omega, ttrap.a, 0.0);
      emit(dimple::probability_sweep(t_n, t_target, parse_grid(u0_grid), base, spec), g,
           cmdline);
    } else if (figures->parsed()) {
      if (g.preset == "fig1" || g.preset == "fig2") {
        int n = g.preset == "fig1" ? 0 : 2;
        dimple::TrapParams base = dimple::TrapParams::natural(1.0, 3.0, 0.0);
        emit(dimple::probability_sweep(n, 0, parse_grid("0:20:40"), base, spec), g, cmdline);
      } else if (g.preset == "fig3" || g.preset == "fig4" || g.preset == "fig5") {
        dimple::ScatterParams fixed;
        dimple::SweepVariable vary;
        std::vector<double> grid;
        if (g.preset == "fig3") {
          fixed.a = 3.0;
          fixed.U0 = 10.0;
          vary = dimple::SweepVariable::E;
          grid = parse_grid("0.25:1000:3999");
        } else if (g.preset == "fig4") {
          fixed.E = 1.0;
          fixed.U0 = 10.0;
          vary = dimple::SweepVariable::a;
          grid = parse_grid("0.05:6:238");
        } else {
          fixed.E = 1.0;
          fixed.a = 3.0;
          vary = dimple::SweepVariable::U0;
          grid = parse_grid("0.05:30:299");
        }
        dimple::SweepTable t = dimple::scatter_sweep(vary, grid, fixed);
        degraded = table_has_degraded(t);
        emit(t, g, cmdline);
      } else {
        std::cerr << "figures: unknown preset '" << g.preset << "' (fig1..fig5)\n";
        return kExitUsage;
      }
    } else if (delta->parsed()) {
      if (!(dl_c >= 0.0) || !(dl_a_start > 0.0) || dl_halvings < 1) {
        std::cerr << "delta-limit: need c >= 0, a-start > 0, halvings >= 1\n";
        return kExitUsage;
      }
      std::vector<double> as;
      for (int i = 0; i <= dl_halvings; ++i) as.push_back(dl_a_start * std::ldexp(1.0, -i));
      dimple::TrapParams base = dimple::TrapParams::natural(1.0, 1.0, 0.0);
      dimple::SweepTable t =
          dimple::dimple_to_delta_convergence(dl_c, as, base, dl_levels, spec);
      t.columns.push_back("t_gap");
      for (size_t i = 0; i < t.rows.size(); ++i) {
        double gap = dl_c > 0.0 ? dimple::scattering_delta_gap(dl_E, dl_c, as[i]) : 0.0;
        t.rows[i].push_back(dimple::SweepTable::num(gap, 6));
      }
      emit(t, g, cmdline);
    } else if (scatter->parsed()) {
      dimple::ScatterParams fixed;
      if (!sc_fixed_json.empty()) {
        nlohmann::json j = nlohmann::json::parse(sc_fixed_json);
        if (j.contains("E")) fixed.E = j["E"].get<double>();
        if (j.contains("a")) fixed.a = j["a"].get<double>();
        if (j.contains("U0")) fixed.U0 = j["U0"].get<double>();
        if (j.contains("hbar")) fixed.hbar = j["hbar"].get<double>();
        if (j.contains("m")) fixed.m = j["m"].get<double>();
      }
      dimple::SweepVariable vary;
      if (sc_vary == "E")
        vary = dimple::SweepVariable::E;
      else if (sc_vary == "a")
        vary = dimple::SweepVariable::a;
      else if (sc_vary == "U0")
        vary = dimple::SweepVariable::U0;
      else {
        std::cerr << "scatter: --vary must be E, a, or U0\n";
        return kExitUsage;
      }
      dimple::ScatterMethod m = sc_method == "linear_solve" ? dimple::ScatterMethod::linear_solve
                                                            : dimple::ScatterMethod::closed_form;
      dimple::SweepTable t = dimple::scatter_sweep(vary, parse_grid(sc_grid), fixed, m);
      degraded = table_has_degraded(t);
      emit(t, g, cmdline);
    }

    if (degraded && !g.allow_degraded) {
      std::cerr << "degraded rows present (rerun with --allow-degraded to accept)\n";
      return kExitDegraded;
    }
    return kExitOk;
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitDegraded;
  }
}
