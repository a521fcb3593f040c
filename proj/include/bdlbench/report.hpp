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

#ifndef BDLBENCH_REPORT_HPP_
#define BDLBENCH_REPORT_HPP_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bdlbench/bench.hpp"

namespace bdlbench {

// One row of the flat CSV export: a single (method, split, fraction) point.
//
// Columns: method,split,status,fraction,accuracy_mean,accuracy_stderr,
//          auc_mean,auc_stderr,oracle_accuracy_mean,n_seeds
// Missing AUCs are written as empty cells.
struct ReportCsvRow {
  std::string method;
  std::string split;
  std::string status;
  double fraction = 0.0;
  double accuracy_mean = 0.0;
  double accuracy_stderr = 0.0;
  std::optional<double> auc_mean;
  std::optional<double> auc_stderr;
  double oracle_accuracy_mean = 0.0;
  std::size_t n_seeds = 0;

  friend bool operator==(const ReportCsvRow&, const ReportCsvRow&) = default;
};

std::vector<ReportCsvRow> ReportRows(const BenchmarkReport& report);
std::string ReportToCsv(const BenchmarkReport& report);
std::vector<ReportCsvRow> ParseReportCsv(std::string_view text);  // throws ParseError

// "87.8±1.1": value and stderr scaled by 100, one decimal.
std::string FormatCell(const MeanStderr& value);

// Rows per method, an (AUC, accuracy) column pair per table fraction.
std::string MarkdownTable(const BenchmarkReport& report, SplitTag split);
// Both splits under headings.
std::string ReportToMarkdown(const BenchmarkReport& report);

std::string ReportToJsonText(const BenchmarkReport& report);
BenchmarkReport LoadReport(const std::string& path);

// Writes report.json, report.csv and report.md into `dir` (created if needed).
// Throws IoError when a file cannot be written.
void EmitReport(const BenchmarkReport& report, const std::string& dir);

// Writes plot bundles into `dir`:
//   referral_<split>_<method>.csv  fraction,auc_mean,auc_stderr,acc_mean,acc_stderr,
//                                  oracle_acc_mean
//   roc_<split>_<method>_r<pct>.csv fpr,tpr,reference_sensitivity,reference_specificity
// Returns the written paths.
std::vector<std::string> EmitPlotData(const BenchmarkReport& report, const std::string& dir);

void WriteTextFile(const std::string& path, std::string_view contents);
std::string ReadTextFile(const std::string& path);

}  // namespace bdlbench

#endif  // BDLBENCH_REPORT_HPP_
