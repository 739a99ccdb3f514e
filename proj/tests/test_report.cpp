#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "lgasym/report.hpp"

using namespace lgasym;

namespace {

ReportInput input(const char* f, const char* g, EndpointKind e = EndpointKind::Infinity) {
  ReportInput in;
  in.f = f;
  in.g = g;
  in.options.endpoint = e;
  return in;
}

}  // namespace

TEST(Format, SeventeenDigits) {
  EXPECT_EQ(format_double17(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double17(1.0), "1.0");
  EXPECT_EQ(format_double17(1e300), "1.0000000000000001e+300");
  EXPECT_EQ(format_double17(std::nan("")), "null");
}

TEST(Json, FixedOrderAndNulls) {
  Json j;
  j["b"] = 1;
  j["a"] = number(std::numeric_limits<double>::infinity());
  j["c"] = Json::array({0.5, true});
  EXPECT_EQ(to_json_text(j), "{\n  \"b\": 1,\n  \"a\": null,\n  \"c\": [\n    0.5,\n    true\n  ]\n}\n");
}

TEST(Json, AnalysisReportIsDeterministic) {
  const ReportInput in = input("1", "3/(4*x^2)");
  const std::string a = to_json_text(analysis_json(in, Analysis::run(in.f, in.g, in.options)));
  const std::string b = to_json_text(analysis_json(in, Analysis::run(in.f, in.g, in.options)));
  EXPECT_EQ(a, b);
  const Json j = Json::parse(a);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["regime"], "ConstantF_Exp");
  EXPECT_TRUE(j["constants"]["inside_certified_disk"].get<bool>());
  EXPECT_EQ(j["constants"]["z_inf"]["tol"].get<double>(), 1e-10);
  EXPECT_TRUE(j["certificate"].contains("zg_l1_bound"));
  EXPECT_FALSE(j.contains("timings"));
}

TEST(Json, OscillatoryReportHasCoefficients) {
  ReportInput in = input("0-1", "3/(4*x^2)");
  in.options.oracle = false;
  const Json j = analysis_json(in, Analysis::run(in.f, in.g, in.options));
  for (const char* k : {"xi1", "xi2", "eta1", "eta2", "determinant"}) EXPECT_TRUE(j["constants"].contains(k)) << k;
}

TEST(Json, FailureReport) {
  const ReportInput in = input("0", "2/x^2");
  try {
    Analysis::run(in.f, in.g, in.options);
    FAIL();
  } catch (const std::exception& e) {
    EXPECT_EQ(exit_code_for(e), ExitCode::Hypothesis);
    const Json j = failure_json(in, e);
    EXPECT_EQ(j["status"], "hypothesis_failed");
    EXPECT_EQ(j["schema"], 1);
  }
  EXPECT_EQ(exit_code_for(ParseError("bad", 0)), ExitCode::Internal);
}

TEST(Csv, QuotingAndEmptyFields) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  std::ostringstream os;
  write_csv(os, {{1.0, 2.0, std::nan(""), 0.5, 1.0}});
  EXPECT_EQ(os.str(), "x,u_numeric,approximant,ratio,envelope_bound\r\n1.0,2.0,,0.5,1.0\r\n");
}

TEST(Table, ZeroPerturbationRatioIsOne) {
  AnalysisOptions o;
  o.oracle = false;
  const Analysis an = Analysis::run("1", "0", o);
  for (const TableRow& r : tabulate(an, Branch::Dominant, sample_points(0.5, 10.0, 20, false))) {
    EXPECT_EQ(r.ratio, 1.0);
  }
}

TEST(Table, ModifiedBesselRatioSettles) {
  AnalysisOptions o;
  o.oracle = false;
  const Analysis an = Analysis::run("1", "3/(4*x^2)", o);
  const std::vector<TableRow> rows = tabulate(an, Branch::Dominant, sample_points(2.0, 40.0, 50, true));
  ASSERT_EQ(rows.size(), 50u);
  EXPECT_NEAR(rows.back().ratio, 1.0, 0.02);
  EXPECT_LT(std::fabs(rows.back().ratio - rows[rows.size() - 2].ratio), 1e-3);
  for (const TableRow& r : rows) EXPECT_GE(r.envelope_bound, 1.0);
}

TEST(Table, PointsBeforeCutoffUseDirectSolve) {
  AnalysisOptions o;
  o.oracle = false;
  const Analysis an = Analysis::run("1", "3/(4*x^2)", o);
  const double a = an.cutoff_original();
  const std::vector<TableRow> rows = tabulate(an, Branch::Dominant, {0.5 * a, a, 2 * a});
  EXPECT_TRUE(std::isfinite(rows[0].u_numeric));
  EXPECT_TRUE(std::isnan(rows[0].ratio));
  EXPECT_NEAR(rows[1].u_numeric, an.branch(Branch::Dominant, a).value.real(), 1e-12);
}

TEST(Table, OscillatoryEnvelopeIsMonotone) {
  AnalysisOptions o;
  o.oracle = false;
  const Analysis an = Analysis::run("0-1", "(0-1)/(4*x^2)", o);
  const std::vector<TableRow> rows = tabulate(an, Branch::Plus, sample_points(5.0, 60.0, 40, false));
  for (std::size_t k = 1; k < rows.size(); ++k) EXPECT_GE(rows[k].envelope_bound, rows[k - 1].envelope_bound);
}
