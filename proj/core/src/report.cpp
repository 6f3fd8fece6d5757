// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#include "holonomy/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <utility>

#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#else
#include <json.hpp>
#endif

namespace holonomy {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::string_view kSchema = "holonomy-report/1";

std::string format_residual(double r) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", r);
  return buf;
}

}  // namespace

bool Report::pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.pass; });
}

void Report::add(CheckResult check) { checks.push_back(std::move(check)); }

void Report::absorb(const VerifyReport& verify) {
  for (const CheckResult& c : verify.checks) checks.push_back(c);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string digest_hex(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

std::string machine_report(const Report& report) {
  ordered_json j;
  j["schema"] = kSchema;
  j["command"] = report.command;
  j["scenario"] = report.scenario_digest;
  j["seed"] = report.seed;
  j["pass"] = report.pass();
  j["checks"] = ordered_json::array();
  for (const CheckResult& c : report.checks) {
    ordered_json jc;
    jc["name"] = c.name;
    jc["residual"] = c.residual;
    jc["pass"] = c.pass;
    jc["witness"] = c.witness;
    j["checks"].push_back(std::move(jc));
  }
  j["tables"] = ordered_json::array();
  for (const ReportTable& t : report.tables) {
    ordered_json jt;
    jt["title"] = t.title;
    jt["columns"] = t.columns;
    jt["rows"] = t.rows;
    j["tables"].push_back(std::move(jt));
  }
  j["wall_ms"] = report.timing ? report.wall_ms : 0.0;
  return j.dump(2) + "\n";
}

std::string human_report(const Report& report) {
  std::ostringstream out;
  out << "command:  " << report.command << "\n";
  out << "scenario: " << report.scenario_digest << "\n";
  out << "seed:     " << report.seed << "\n";

  for (const ReportTable& t : report.tables) {
    out << "\n" << t.title << "\n";
    std::vector<std::size_t> width(t.columns.size());
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      width[c] = t.columns[c].size();
      for (const auto& row : t.rows) {
        if (c < row.size()) width[c] = std::max(width[c], row[c].size());
      }
    }
    const auto emit_row = [&](const std::vector<std::string>& row) {
      out << " ";
      for (std::size_t c = 0; c < width.size(); ++c) {
        const std::string& cell = c < row.size() ? row[c] : std::string();
        out << " " << cell << std::string(width[c] - cell.size(), ' ');
      }
      out << "\n";
    };
    emit_row(t.columns);
    out << " ";
    for (std::size_t c = 0; c < width.size(); ++c) {
      out << " " << std::string(width[c], '-');
    }
    out << "\n";
    for (const auto& row : t.rows) emit_row(row);
  }

  if (!report.checks.empty()) {
    out << "\n";
    for (const CheckResult& c : report.checks) {
      out << (c.pass ? "PASS" : "FAIL") << "  " << c.name << "  residual "
          << format_residual(c.residual);
      if (!c.witness.empty()) out << "  [" << c.witness << "]";
      out << "\n";
    }
    std::size_t passed = 0;
    for (const CheckResult& c : report.checks) passed += c.pass ? 1 : 0;
    out << "overall: " << (report.pass() ? "PASS" : "FAIL") << " (" << passed
        << "/" << report.checks.size() << " checks)\n";
  }
  if (report.timing) {
    out << "wall: " << format_residual(report.wall_ms) << " ms\n";
  }
  return out.str();
}

}  // namespace holonomy
