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

#include <filesystem>

#include <gtest/gtest.h>

#include "bdlbench/errors.hpp"
#include "hand_report.hpp"

namespace bdlbench {
namespace {

using testing::HandReport;
namespace fs = std::filesystem;

std::string Golden(const std::string& name) {
  return ReadTextFile((fs::path(BDLBENCH_GOLDEN_DIR) / name).string());
}

TEST(FormatCell, OneDecimalPercent) {
  EXPECT_EQ(FormatCell({0.878, 0.011}), "87.8±1.1");
  EXPECT_EQ(FormatCell({1.0, 0.0}), "100.0±0.0");
  EXPECT_EQ(FormatCell({0.5, 0.0004}), "50.0±0.0");
}

TEST(MarkdownTable, MatchesGolden) {
  EXPECT_EQ(MarkdownTable(HandReport(), SplitTag::kTest), Golden("table_report.md"));
}

TEST(ReportJson, MatchesGolden) {
  EXPECT_EQ(ReportToJsonText(HandReport()), Golden("hand_report.json"));
}

TEST(ReportCsv, MatchesGolden) {
  EXPECT_EQ(ReportToCsv(HandReport()), Golden("hand_report.csv"));
}

TEST(ReportCsv, JsonCsvJsonRoundTrip) {
  BenchmarkReport r = HandReport();
  // Values without short decimal forms.
  r.methods[0].test.curve.points[1].accuracy.mean = 0.1 + 0.2;
  r.methods[0].test.curve.points[1].accuracy.standard_error = 1.0 / 3.0;
  const auto from_json = BenchmarkReportFromJson(nlohmann::json::parse(ReportToJsonText(r)));
  const auto rows = ParseReportCsv(ReportToCsv(from_json));
  EXPECT_EQ(rows, ReportRows(r));
  EXPECT_EQ(rows[1].accuracy_mean, 0.1 + 0.2);
  EXPECT_EQ(rows[1].accuracy_stderr, 1.0 / 3.0);
  EXPECT_THROW(ParseReportCsv("nope\n"), ParseError);
  EXPECT_THROW(ParseReportCsv(std::string(ReportToCsv(r)).append("x,y\n")), ParseError);
}

TEST(PlotData, ReferralAndRocFiles) {
  const auto dir = fs::temp_directory_path() / "bdlbench_plots";
  fs::remove_all(dir);
  const auto files = EmitPlotData(HandReport(), dir.string());
  // Two ok methods, two splits, one referral and one ROC file each.
  EXPECT_EQ(files.size(), 8u);
  const std::string referral = ReadTextFile((dir / "referral_test_mc_dropout.csv").string());
  EXPECT_EQ(referral.substr(0, referral.find('\n')),
            "fraction,auc_mean,auc_stderr,acc_mean,acc_stderr,oracle_acc_mean");
  const std::string random = ReadTextFile((dir / "referral_shifted_test_random.csv").string());
  EXPECT_NE(random.find("\n0.5,,,0.85,0,0.85\n"), std::string::npos) << random;
  const std::string roc = ReadTextFile((dir / "roc_test_mc_dropout_r100.csv").string());
  EXPECT_EQ(roc,
            "fpr,tpr,reference_sensitivity,reference_specificity\n"
            "0,0,0.85,0.8\n0.1,0.6,0.85,0.8\n0.2,0.9,0.85,0.8\n1,1,0.85,0.8\n");
  EXPECT_FALSE(fs::exists(dir / "referral_test_mfvi.csv"));
  fs::remove_all(dir);
}

TEST(EmitReport, WritesAllFormats) {
  const auto dir = fs::temp_directory_path() / "bdlbench_emit";
  fs::remove_all(dir);
  EmitReport(HandReport(), dir.string());
  for (const char* name : {"report.json", "report.csv", "report.md"}) {
    EXPECT_TRUE(fs::exists(dir / name)) << name;
  }
  const auto back = LoadReport((dir / "report.json").string());
  EXPECT_EQ(ReportToJsonText(back), ReportToJsonText(HandReport()));
  fs::remove_all(dir);
}

TEST(EmitReport, UnwritablePathIsIoError) {
  EXPECT_THROW(EmitReport(HandReport(), "/proc/bdlbench/out"), IoError);
  EXPECT_THROW(WriteTextFile("/nonexistent/dir/x.txt", "x"), IoError);
}

}  // namespace
}  // namespace bdlbench
