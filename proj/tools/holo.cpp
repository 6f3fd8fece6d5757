// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

// holo: command line front end for the holonomy library. Every command
// reads an optional scenario file, evaluates one tool, prints a human
// report to stdout, and optionally writes the canonical machine report.
// Exit codes: 0 all checks pass, 1 a check failed, 2 bad input.

#include <cctype>
#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include "CLI11.hpp"
#endif

#include "holonomy/cochain.hpp"
#include "holonomy/error.hpp"
#include "holonomy/group.hpp"
#include "holonomy/groupoid.hpp"
#include "holonomy/loop.hpp"
#include "holonomy/randomgen.hpp"
#include "holonomy/report.hpp"
#include "holonomy/scalar.hpp"
#include "holonomy/scenario.hpp"
#include "holonomy/sectors.hpp"
#include "holonomy/selftest.hpp"
#include "holonomy/transgression.hpp"

namespace {

using namespace holonomy;

std::string cell(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string turn_cell(const Scalar& s) {
  return s.is_exact() ? s.phase().turns().str() : std::string();
}

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("GERBE_SEED");
  if (s == nullptr || *s == '\0') return std::nullopt;
  for (const char* p = s; *p; ++p) {
    if (!std::isdigit(static_cast<unsigned char>(*p))) {
      fail(Errc::SyntaxError,
           std::string("GERBE_SEED: expected an unsigned integer, got '") +
               s + "'");
    }
  }
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s, &end, 10);
  if (errno != 0 || end == s || *end != '\0') {
    fail(Errc::SyntaxError,
         std::string("GERBE_SEED: value out of range: '") + s + "'");
  }
  return v;
}

Scenario load(const std::string& path) {
  Scenario sc = load_scenario(path);
  if (const auto seed = env_seed()) sc.settings.seed = *seed;
  return sc;
}

Report base_report(std::string command, const Scenario* sc) {
  Report r;
  r.command = std::move(command);
  if (sc != nullptr) {
    r.scenario_digest = sc->digest;
    r.seed = sc->settings.seed;
  } else if (const auto seed = env_seed()) {
    r.seed = *seed;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Commands.
// ---------------------------------------------------------------------------

Report cmd_verify(const std::string& path) {
  const Scenario sc = load(path);
  Report r = base_report("verify", &sc);
  bool any = false;
  if (sc.line) {
    r.absorb(verify_cocycle(sc.groupoid, *sc.line, sc.settings));
    any = true;
  }
  if (sc.gerbe) {
    r.absorb(verify_cocycle(sc.groupoid, *sc.gerbe, sc.settings));
    any = true;
  }
  if (sc.flat) {
    r.absorb(verify_cocycle(sc.groupoid, *sc.flat, sc.settings));
    any = true;
  }
  if (!any) {
    fail(Errc::InvalidArgument, "scenario carries no cochain data to verify");
  }
  return r;
}

Report cmd_tau1(const std::string& path, const std::string& loop_id) {
  const Scenario sc = load(path);
  Report r = base_report("tau1", &sc);
  if (!sc.line) {
    fail(Errc::InvalidArgument, "tau1 needs line data in the scenario");
  }
  ReportTable table;
  table.title = "loop holonomy";
  table.columns = {"loop", "re", "im", "turn"};
  const auto emit = [&](const std::string& id, const SegmentedLoop& psi) {
    const Scalar h = tau1_eval(sc.groupoid, *sc.line, psi);
    table.rows.push_back({id, cell(h.value().real()), cell(h.value().imag()),
                          turn_cell(h)});
  };
  if (!loop_id.empty()) {
    const auto it = sc.loops.find(loop_id);
    if (it == sc.loops.end()) {
      fail(Errc::InvalidArgument, "unknown loop '" + loop_id + "'");
    }
    emit(it->first, it->second);
  } else {
    if (sc.loops.empty()) {
      fail(Errc::InvalidArgument, "scenario defines no loops");
    }
    for (const auto& [id, psi] : sc.loops) emit(id, psi);
  }
  r.tables.push_back(std::move(table));
  return r;
}

Report cmd_tau2(const std::string& path, const std::string& arrow_id,
                const std::string& tangent_id) {
  const Scenario sc = load(path);
  Report r = base_report("tau2", &sc);
  if (!sc.gerbe) {
    fail(Errc::InvalidArgument, "tau2 needs gerbe data in the scenario");
  }
  const TransgressedBundle bundle = tau2_build(*sc.gerbe);

  if (tangent_id.empty() || !arrow_id.empty()) {
    ReportTable table;
    table.title = "loop transition values";
    table.columns = {"arrow", "re", "im", "turn"};
    const auto emit = [&](const std::string& id, const LoopArrow& arrow) {
      const Scalar f = F_eval(sc.groupoid, bundle, arrow);
      table.rows.push_back({id, cell(f.value().real()),
                            cell(f.value().imag()), turn_cell(f)});
    };
    if (!arrow_id.empty()) {
      const auto it = sc.loop_arrows.find(arrow_id);
      if (it == sc.loop_arrows.end()) {
        fail(Errc::InvalidArgument, "unknown loop arrow '" + arrow_id + "'");
      }
      emit(it->first, it->second);
    } else {
      for (const auto& [id, arrow] : sc.loop_arrows) emit(id, arrow);
    }
    if (!table.rows.empty()) r.tables.push_back(std::move(table));
  }

  if (arrow_id.empty() || !tangent_id.empty()) {
    ReportTable table;
    table.title = "connection pairings";
    table.columns = {"tangent", "loop", "re", "im"};
    const auto emit = [&](const std::string& id, const ScenarioTangent& st) {
      const auto& psi = sc.loops.at(st.loop);
      const std::complex<double> d =
          Delta_eval(sc.groupoid, bundle, psi, st.tangent);
      table.rows.push_back({id, st.loop, cell(d.real()), cell(d.imag())});
    };
    if (!tangent_id.empty()) {
      const auto it = sc.tangents.find(tangent_id);
      if (it == sc.tangents.end()) {
        fail(Errc::InvalidArgument,
             "unknown tangent '" + tangent_id + "'");
      }
      emit(it->first, it->second);
    } else {
      for (const auto& [id, st] : sc.tangents) emit(id, st);
    }
    if (!table.rows.empty()) r.tables.push_back(std::move(table));
  }

  if (r.tables.empty()) {
    fail(Errc::InvalidArgument,
         "scenario defines no loop arrows or tangents to evaluate");
  }
  return r;
}

Report cmd_taun(const std::string& path,
                const std::vector<std::string>& arrow_ids) {
  const Scenario sc = load(path);
  Report r = base_report("taun", &sc);
  if (!sc.flat) {
    fail(Errc::InvalidArgument, "taun needs flat data in the scenario");
  }
  std::vector<LoopArrow> chain;
  std::string joined;
  for (const std::string& id : arrow_ids) {
    const auto it = sc.loop_arrows.find(id);
    if (it == sc.loop_arrows.end()) {
      fail(Errc::InvalidArgument, "unknown loop arrow '" + id + "'");
    }
    chain.push_back(it->second);
    if (!joined.empty()) joined += " . ";
    joined += id;
  }
  const Scalar f = tau_n_flat_eval(sc.groupoid, *sc.flat, chain);
  ReportTable table;
  table.title = "flat transgression (degree " + std::to_string(sc.flat->n) +
                ")";
  table.columns = {"chain", "re", "im", "turn"};
  table.rows.push_back(
      {joined, cell(f.value().real()), cell(f.value().imag()), turn_cell(f)});
  r.tables.push_back(std::move(table));
  return r;
}

Report cmd_square(const std::string& path) {
  const Scenario sc = load(path);
  Report r = base_report("square", &sc);
  if (!sc.line) {
    fail(Errc::InvalidArgument, "square needs line data in the scenario");
  }
  std::vector<LoopArrow> arrows;
  for (const auto& [id, arrow] : sc.loop_arrows) arrows.push_back(arrow);
  std::vector<LoopFamily> families;
  for (const auto& [id, fam] : sc.families) families.push_back(fam);
  if (arrows.empty() && families.empty()) {
    fail(Errc::InvalidArgument,
         "square needs loop arrows or families in the scenario");
  }
  r.absorb(check_commutation_square(sc.groupoid, *sc.line, arrows, families,
                                    sc.settings.tol, sc.form_tol,
                                    sc.fd_step));
  return r;
}

Report cmd_inertia(const std::string& path) {
  const Scenario sc = load(path);
  Report r = base_report("inertia", &sc);
  if (!sc.gerbe) {
    fail(Errc::InvalidArgument, "inertia needs gerbe data in the scenario");
  }
  const LocalSystem ls =
      restrict_to_inertia(sc.groupoid, tau2_build(*sc.gerbe));
  r.absorb(check_inner_local_system(sc.groupoid, ls, sc.settings));

  const InertiaGroupoid& in = ls.inertia();
  ReportTable table;
  if (!in.objects.empty()) {
    table.title = "inertia objects (point, element)";
    table.columns = {"point", "element"};
    for (const auto& [point, g] : in.objects) {
      table.rows.push_back({std::to_string(point), std::to_string(g)});
    }
  } else {
    table.title = "fixed components per element";
    table.columns = {"element", "components", "dims"};
    for (std::size_t g = 0; g < in.fixed.size(); ++g) {
      std::string dims;
      for (const FixedComponent& c : in.fixed[g]) {
        if (!dims.empty()) dims += ",";
        dims += std::to_string(c.dim());
      }
      table.rows.push_back({std::to_string(g),
                            std::to_string(in.fixed[g].size()), dims});
    }
  }
  r.tables.push_back(std::move(table));
  return r;
}

Report cmd_sectors(const std::string& path) {
  const Scenario sc = load(path);
  Report r = base_report("sectors", &sc);
  std::optional<TransgressedBundle> bundle;
  if (sc.gerbe) bundle.emplace(tau2_build(*sc.gerbe));
  const SectorDecomposition sd =
      sector_decomposition(sc.groupoid, bundle ? &*bundle : nullptr);
  ReportTable table;
  table.title = "twisted sectors";
  table.columns = {"rep", "class size", "centralizer", "fixed objects",
                   "first value"};
  for (const Sector& s : sd.sectors) {
    const std::size_t fixed = s.fixed_points.empty() ? s.components.size()
                                                     : s.fixed_points.size();
    std::string first;
    if (!s.values.empty() && !s.values[0].empty()) {
      const Scalar& v = s.values[0][0];
      first = cell(v.value().real()) + " + " + cell(v.value().imag()) + "i";
    }
    table.rows.push_back({std::to_string(s.rep),
                          std::to_string(s.class_members.size()),
                          std::to_string(s.centralizer.size()),
                          std::to_string(fixed), first});
  }
  r.tables.push_back(std::move(table));
  return r;
}

Report cmd_h2(const std::string& spec) {
  const FiniteGroup g = FiniteGroup::parse(spec);
  Report r = base_report("h2", nullptr);
  const SchurData sd = h2_finite_group(g);
  ReportTable table;
  table.title = "multiplier of " + spec;
  table.columns = {"class", "invariant factor", "representative"};
  for (std::size_t i = 0; i < sd.invariant_factors.size(); ++i) {
    table.rows.push_back({std::to_string(i),
                          std::to_string(sd.invariant_factors[i]),
                          sd.representatives[i].class_id()});
  }
  if (table.rows.empty()) {
    table.rows.push_back({"-", "trivial", "-"});
  }
  r.tables.push_back(std::move(table));
  return r;
}

Report cmd_torsion(const std::string& spec, std::size_t class_index) {
  const FiniteGroup g = FiniteGroup::parse(spec);
  Report r = base_report("torsion", nullptr);
  const SchurData sd = h2_finite_group(g);
  if (class_index >= sd.representatives.size()) {
    fail(Errc::InvalidArgument,
         "class index " + std::to_string(class_index) + " out of range; " +
             spec + " has " + std::to_string(sd.representatives.size()) +
             " generator classes");
  }
  const TorsionCocycle& eps = sd.representatives[class_index];
  const Groupoid gpd = point_quotient(g);
  const TransgressedBundle bundle = tau2_build(torsion_gerbe(gpd, eps));
  ReportTable table;
  table.title = "sector weights of " + spec + " class " + eps.class_id();
  table.columns = {"wrap", "transport", "re", "im", "turn"};
  for (GroupElement w = 0; w < g.order(); ++w) {
    const SegmentedLoop phi = build_one_segment_loop(
        gpd, PathSegment::constant(Rational(0), Rational(1), Point::at(0)),
        w);
    for (GroupElement k = 0; k < g.order(); ++k) {
      const Scalar f =
          F_eval(gpd, bundle, transported_loop_arrow(gpd, phi, {k}));
      table.rows.push_back({std::to_string(w), std::to_string(k),
                            cell(f.value().real()), cell(f.value().imag()),
                            turn_cell(f)});
    }
  }
  r.tables.push_back(std::move(table));
  return r;
}

Report cmd_selftest() {
  Report r = base_report("selftest", nullptr);
  ReportTable table;
  table.title = "identity suite";
  table.columns = {"criterion", "residual", "tolerance", "seconds", "budget",
                   "detail"};
  for (const SelftestResult& s : run_selftest()) {
    CheckResult check;
    check.name = s.name;
    check.residual = s.residual;
    check.pass = s.pass;
    check.witness = s.detail;
    r.add(std::move(check));
    table.rows.push_back({s.name, cell(s.residual), cell(s.tolerance),
                          cell(s.seconds), cell(s.budget), s.detail});
  }
  r.tables.push_back(std::move(table));
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"holonomy and transgression over finite-model groupoids"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string out_path;
  bool timing = false;
  app.add_option("--out", out_path,
                 "write the machine-readable report to this file");
  app.add_flag("--timing", timing, "include wall time in the report");

  std::string scenario_path;
  std::string loop_id;
  std::string arrow_id;
  std::string tangent_id;
  std::vector<std::string> arrow_ids;
  std::string group_spec;
  std::size_t class_index = 0;

  CLI::App* verify = app.add_subcommand(
      "verify", "run the cocycle checks on the scenario data");
  verify->add_option("scenario", scenario_path, "scenario file")->required();

  CLI::App* tau1 = app.add_subcommand(
      "tau1", "holonomy of line data on scenario loops");
  tau1->add_option("scenario", scenario_path, "scenario file")->required();
  tau1->add_option("--loop", loop_id, "evaluate one named loop");

  CLI::App* tau2 = app.add_subcommand(
      "tau2",
      "transition values and connection pairings of the scenario gerbe");
  tau2->add_option("scenario", scenario_path, "scenario file")->required();
  tau2->add_option("--arrow", arrow_id, "evaluate one named loop arrow");
  tau2->add_option("--tangent", tangent_id, "pair one named tangent");

  CLI::App* taun = app.add_subcommand(
      "taun", "flat transgression on a chain of composable loop arrows");
  taun->add_option("scenario", scenario_path, "scenario file")->required();
  taun->add_option("--arrows", arrow_ids, "loop arrow names, in order")
      ->required()
      ->delimiter(',');

  CLI::App* square = app.add_subcommand(
      "square", "check the coboundary-transgression exchange identity");
  square->add_option("scenario", scenario_path, "scenario file")->required();

  CLI::App* inertia = app.add_subcommand(
      "inertia", "restrict the transgressed bundle to the inertia groupoid");
  inertia->add_option("scenario", scenario_path, "scenario file")->required();

  CLI::App* sectors = app.add_subcommand(
      "sectors", "twisted sector decomposition of the scenario groupoid");
  sectors->add_option("scenario", scenario_path, "scenario file")->required();

  CLI::App* h2 = app.add_subcommand(
      "h2", "multiplier invariant factors of a finite group");
  h2->add_option("--group", group_spec, "group spec, e.g. Z/2xZ/2 or S3")
      ->required();

  CLI::App* torsion = app.add_subcommand(
      "torsion", "sector weight table of one multiplier generator class");
  torsion->add_option("--group", group_spec, "group spec")->required();
  torsion->add_option("--class", class_index, "generator class index");

  CLI::App* selftest = app.add_subcommand(
      "selftest", "run the seeded end-to-end identity suite");
  (void)selftest;

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const auto t0 = std::chrono::steady_clock::now();
    Report report;
    if (app.got_subcommand(verify)) {
      report = cmd_verify(scenario_path);
    } else if (app.got_subcommand(tau1)) {
      report = cmd_tau1(scenario_path, loop_id);
    } else if (app.got_subcommand(tau2)) {
      report = cmd_tau2(scenario_path, arrow_id, tangent_id);
    } else if (app.got_subcommand(taun)) {
      report = cmd_taun(scenario_path, arrow_ids);
    } else if (app.got_subcommand(square)) {
      report = cmd_square(scenario_path);
    } else if (app.got_subcommand(inertia)) {
      report = cmd_inertia(scenario_path);
    } else if (app.got_subcommand(sectors)) {
      report = cmd_sectors(scenario_path);
    } else if (app.got_subcommand(h2)) {
      report = cmd_h2(group_spec);
    } else if (app.got_subcommand(torsion)) {
      report = cmd_torsion(group_spec, class_index);
    } else {
      report = cmd_selftest();
    }
    if (timing) {
      report.timing = true;
      report.wall_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
    }
    std::cout << human_report(report);
    if (!out_path.empty()) {
      std::ofstream out(out_path);
      out << machine_report(report);
      if (!out.good()) {
        fail(Errc::IoError, "cannot write report to '" + out_path + "'");
      }
    }
    return report.pass() ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
