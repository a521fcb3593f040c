// Copyright 2026 The bdlbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bdlbench/report.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "bdlbench/errors.hpp"

namespace bdlbench {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kCsvHeader =
    "method,split,status,fraction,accuracy_mean,accuracy_stderr,auc_mean,auc_stderr,"
    "oracle_accuracy_mean,n_seeds";

const SplitReport& SplitOf(const MethodReport& m, SplitTag split) {
  return split == SplitTag::kShiftedTest ? m.shifted_test : m.test;
}

constexpr SplitTag kReportSplits[] = {SplitTag::kTest, SplitTag::kShiftedTest};

std::string Percent(double fraction) {
  return fmt::format("{}", static_cast<long>(std::lround(fraction * 100.0)));
}

std::string OptionalCell(const std::optional<double>& v) {
  return v ? fmt::format("{}", *v) : std::string();
}

double ParseDouble(std::string_view cell, std::size_t row, std::string_view column) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw ParseError(fmt::format("row {}: column {} is not a number: '{}'", row, column, cell));
  }
  return value;
}

std::vector<std::string_view> SplitCommas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

void WriteTextFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path));
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.close();
  if (!out) throw IoError(fmt::format("failed writing '{}'", path));
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<ReportCsvRow> ReportRows(const BenchmarkReport& report) {
  std::vector<ReportCsvRow> rows;
  for (const auto& m : report.methods) {
    for (SplitTag split : kReportSplits) {
      const SplitReport& s = SplitOf(m, split);
      for (std::size_t i = 0; i < s.curve.points.size(); ++i) {
        const auto& p = s.curve.points[i];
        ReportCsvRow row;
        row.method = std::string(ToString(m.method));
        row.split = std::string(ToString(split));
        row.status = s.ok ? "ok" : "failed";
        row.fraction = p.fraction;
        row.accuracy_mean = p.accuracy.mean;
        row.accuracy_stderr = p.accuracy.standard_error;
        if (p.auc) {
          row.auc_mean = p.auc->mean;
          row.auc_stderr = p.auc->standard_error;
        }
        row.oracle_accuracy_mean = s.oracle.points.at(i).accuracy.mean;
        row.n_seeds = p.accuracy_per_seed.size();
        rows.push_back(std::move(row));
      }
      if (!s.ok) {
        ReportCsvRow row;
        row.method = std::string(ToString(m.method));
        row.split = std::string(ToString(split));
        row.status = "failed";
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::string ReportToCsv(const BenchmarkReport& report) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : ReportRows(report)) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", r.method, r.split, r.status, r.fraction,
                       r.accuracy_mean, r.accuracy_stderr, OptionalCell(r.auc_mean),
                       OptionalCell(r.auc_stderr), r.oracle_accuracy_mean, r.n_seeds);
  }
  return out;
}

std::vector<ReportCsvRow> ParseReportCsv(std::string_view text) {
  std::vector<ReportCsvRow> rows;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no++ == 0) {
      if (line != kCsvHeader) throw ParseError("unexpected report CSV header");
      continue;
    }
    if (line.empty()) continue;
    const std::size_t row_no = line_no - 1;
    const auto cells = SplitCommas(line);
    if (cells.size() != 10) {
      throw ParseError(fmt::format("row {}: expected 10 columns, found {}", row_no, cells.size()));
    }
    ReportCsvRow r;
    r.method = std::string(cells[0]);
    r.split = std::string(cells[1]);
    r.status = std::string(cells[2]);
    r.fraction = ParseDouble(cells[3], row_no, "fraction");
    r.accuracy_mean = ParseDouble(cells[4], row_no, "accuracy_mean");
    r.accuracy_stderr = ParseDouble(cells[5], row_no, "accuracy_stderr");
    if (!cells[6].empty()) r.auc_mean = ParseDouble(cells[6], row_no, "auc_mean");
    if (!cells[7].empty()) r.auc_stderr = ParseDouble(cells[7], row_no, "auc_stderr");
    r.oracle_accuracy_mean = ParseDouble(cells[8], row_no, "oracle_accuracy_mean");
    r.n_seeds = static_cast<std::size_t>(ParseDouble(cells[9], row_no, "n_seeds"));
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string FormatCell(const MeanStderr& value) {
  return fmt::format("{:.1f}±{:.1f}", value.mean * 100.0, value.standard_error * 100.0);
}

std::string MarkdownTable(const BenchmarkReport& report, SplitTag split) {
  const auto& fractions = report.config.table_fractions;
  std::string out = "| Method |";
  std::string rule = "|---|";
  for (double f : fractions) {
    out += fmt::format(" {0}% AUC | {0}% Accuracy |", Percent(f));
    rule += "---|---|";
  }
  out += '\n' + rule + '\n';
  for (const auto& m : report.methods) {
    const SplitReport& s = SplitOf(m, split);
    out += fmt::format("| {} |", ToString(m.method));
    for (double f : fractions) {
      const AggregatedPoint* point = nullptr;
      for (const auto& p : s.curve.points) {
        if (p.fraction == f) point = &p;
      }
      if (!s.ok || point == nullptr) {
        out += " failed | failed |";
        continue;
      }
      out += fmt::format(" {} | {} |", point->auc ? FormatCell(*point->auc) : "n/a",
                         FormatCell(point->accuracy));
    }
    out += '\n';
  }
  return out;
}

std::string ReportToMarkdown(const BenchmarkReport& report) {
  std::string out;
  for (SplitTag split : kReportSplits) {
    if (!out.empty()) out += '\n';
    out += fmt::format("## {}\n\n", ToString(split));
    out += MarkdownTable(report, split);
  }
  return out;
}

std::string ReportToJsonText(const BenchmarkReport& report) {
  return ToJson(report).dump(2) + '\n';
}

BenchmarkReport LoadReport(const std::string& path) {
  const std::string text = ReadTextFile(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(fmt::format("{}: {}", path, e.what()));
  }
  return BenchmarkReportFromJson(j);
}

namespace {

void EnsureDirectory(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(fmt::format("cannot create directory '{}': {}", dir, ec.message()));
}

}  // namespace

void EmitReport(const BenchmarkReport& report, const std::string& dir) {
  EnsureDirectory(dir);
  WriteTextFile((fs::path(dir) / "report.json").string(), ReportToJsonText(report));
  WriteTextFile((fs::path(dir) / "report.csv").string(), ReportToCsv(report));
  WriteTextFile((fs::path(dir) / "report.md").string(), ReportToMarkdown(report));
}

std::vector<std::string> EmitPlotData(const BenchmarkReport& report, const std::string& dir) {
  EnsureDirectory(dir);
  std::vector<std::string> written;
  for (const auto& m : report.methods) {
    for (SplitTag split : kReportSplits) {
      const SplitReport& s = SplitOf(m, split);
      if (!s.ok) continue;
      std::string referral = "fraction,auc_mean,auc_stderr,acc_mean,acc_stderr,oracle_acc_mean\n";
      for (std::size_t i = 0; i < s.curve.points.size(); ++i) {
        const auto& p = s.curve.points[i];
        referral += fmt::format(
            "{},{},{},{},{},{}\n", p.fraction, p.auc ? fmt::format("{}", p.auc->mean) : "",
            p.auc ? fmt::format("{}", p.auc->standard_error) : "", p.accuracy.mean,
            p.accuracy.standard_error, s.oracle.points.at(i).accuracy.mean);
      }
      const auto path = (fs::path(dir) / fmt::format("referral_{}_{}.csv", ToString(split),
                                                     ToString(m.method))).string();
      WriteTextFile(path, referral);
      written.push_back(path);

      for (const auto& snap : s.rocs) {
        std::string roc = "fpr,tpr,reference_sensitivity,reference_specificity\n";
        for (const auto& p : snap.roc.points) {
          roc += fmt::format("{},{},{},{}\n", p.fpr, p.tpr, kReferenceSensitivity,
                             kReferenceSpecificity);
        }
        const auto roc_path =
            (fs::path(dir) / fmt::format("roc_{}_{}_r{}.csv", ToString(split), ToString(m.method),
                                         Percent(snap.fraction))).string();
        WriteTextFile(roc_path, roc);
        written.push_back(roc_path);
      }
    }
  }
  return written;
}

}  // namespace bdlbench
