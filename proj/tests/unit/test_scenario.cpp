#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "hjlab/checks.hpp"

using namespace hjlab;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kIo;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

Scenario small(std::vector<std::string> cases, std::vector<std::string> checks) {
  Scenario s;
  s.cases = std::move(cases);
  s.checks = std::move(checks);
  s.n_theta = 12;
  s.n_phi = 24;
  s.rmax = 3;
  return s;
}

}  // namespace

TEST(Scenario, ParseDefaultsAndKeys) {
  const Scenario d = parse_scenario("");
  EXPECT_EQ(d.n_theta, 32);
  EXPECT_EQ(d.n_phi, 64);
  EXPECT_EQ(d.rmax, 6);
  EXPECT_TRUE(d.checks.empty());

  const Scenario s = parse_scenario(
      "cases: [identity-s2, veronese-s4]\n"
      "checks: all\n"
      "resolution: [16, 32]\n"
      "rmax: 4\n"
      "seed: 7\n"
      "tolerances: {tension: 1.0e-10}\n");
  EXPECT_EQ(s.cases.size(), 2u);
  EXPECT_EQ(s.checks, check_names());
  EXPECT_EQ(s.n_theta, 16);
  EXPECT_EQ(s.rmax, 4);
  EXPECT_EQ(s.seed, 7u);
  EXPECT_EQ(s.tolerances.at("tension"), 1e-10);
  EXPECT_EQ(s.tolerances.at("jacobi"), 1e-8);
  EXPECT_EQ(parse_scenario("cases: all").cases, case_names());
}

TEST(Scenario, Rejections) {
  EXPECT_EQ(kind_of([] { parse_scenario("cases: [identity-s2\n"); }), ErrorKind::kRejectedInput);
  EXPECT_EQ(kind_of([] { parse_scenario("- a\n- b\n"); }), ErrorKind::kRejectedInput);
  EXPECT_EQ(kind_of([] { parse_scenario("colour: blue\n"); }), ErrorKind::kRejectedInput);
  EXPECT_EQ(kind_of([] { parse_scenario("resolution: [16]\n"); }), ErrorKind::kRejectedInput);
  EXPECT_EQ(kind_of([] { parse_scenario("resolution: [4, 8]\n"); }), ErrorKind::kRejectedInput);
  EXPECT_EQ(kind_of([] { parse_scenario("rmax: 7\n"); }), ErrorKind::kRejectedInput);
  EXPECT_EQ(kind_of([] { parse_scenario("rmax: two\n"); }), ErrorKind::kRejectedInput);
  EXPECT_EQ(kind_of([] { parse_scenario("cases: [nope]\n"); }), ErrorKind::kUnknownName);
  EXPECT_EQ(kind_of([] { parse_scenario("checks: [nope]\n"); }), ErrorKind::kUnknownName);
  EXPECT_EQ(kind_of([] { parse_scenario("tolerances: {nope: 1.0}\n"); }), ErrorKind::kUnknownName);
  EXPECT_EQ(kind_of([] { parse_scenario("tolerances: {tension: -1.0}\n"); }), ErrorKind::kRejectedInput);
  EXPECT_EQ(kind_of([] { load_scenario("/nonexistent/scenario.yaml"); }), ErrorKind::kIo);
}

TEST(Scenario, ShippedFilesLoad) {
  for (const char* f : {"full.yaml", "negative-controls.yaml", "quick.yaml"}) {
    EXPECT_NO_THROW(load_scenario(std::string(HJLAB_SOURCE_DIR) + "/scenarios/" + f)) << f;
  }
}

TEST(Report, EmptyCheckList) {
  const Report r = run_scenario(small({"identity-s2"}, {}), Executor(1));
  EXPECT_TRUE(r.results.empty());
  EXPECT_TRUE(r.pass());
  EXPECT_NE(report_json(r).find("\"verdict\": \"pass\""), std::string::npos);
  EXPECT_EQ(report_csv(r), "check,case,statistic,value,status\n");
}

TEST(Report, DeterministicAcrossWorkers) {
  const Scenario s = small({"veronese-s4", "rational-d2-cp1", "squash-s2"}, {"tension", "jacobi", "hessian-symmetry"});
  const std::string a = report_json(run_scenario(s, Executor(1)));
  const std::string b = report_json(run_scenario(s, Executor(1)));
  const std::string c = report_json(run_scenario(s, Executor(4)));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
}

TEST(Report, CsvRowCount) {
  const Scenario s = small({"identity-s2", "flat-nonharmonic"}, {"tension", "conformality", "curvature-oracle"});
  const Report r = run_scenario(s, Executor(1));
  ASSERT_EQ(r.results.size(), 6u);
  EXPECT_EQ(count_lines(report_csv(r)), 1u + 3u * 2u * 4u);
}

TEST(Report, PreconditionSkips) {
  const Report r = run_scenario(small({"flat-nonharmonic", "identity-s2"}, {"jacobi", "complex-isotropy"}), Executor(1));
  for (const CheckResult& c : r.results) {
    if (c.case_name == "flat-nonharmonic" || c.check == "complex-isotropy") {
      EXPECT_EQ(c.status, Status::kSkip) << c.check << " " << c.case_name;
      EXPECT_FALSE(c.reason.empty());
    }
  }
  EXPECT_TRUE(r.pass());
  const std::string j = report_json(r);
  EXPECT_NE(j.find("\"status\": \"precondition-skip\""), std::string::npos);
}

TEST(Report, NegativeControls) {
  Scenario s;
  s.cases = {"veronese-s4", "rational-d2-cp1", "flat-nonharmonic", "flat-nonisotropic", "squash-s2", "mixed-cp2"};
  s.checks = {"negative-controls"};
  s.n_theta = 16;
  s.n_phi = 32;
  const Report r = run_scenario(s, Executor(1));
  int components = 0;
  for (const CheckResult& c : r.results) {
    EXPECT_EQ(c.status, Status::kPass) << c.case_name;
    for (const Component& m : c.components) {
      EXPECT_EQ(m.kind, ComponentKind::kExpectedNonzero);
      EXPECT_EQ(m.status, Status::kPass) << c.case_name << " " << m.name;
      ++components;
    }
  }
  EXPECT_GE(components, 10);
}

TEST(Report, BrokenOperatorIsCaught) {
  // Tightening a tolerance below the residual must flip the verdict.
  Scenario s = small({"squash-s2"}, {"tension"});
  s.tolerances["tension_control"] = 1e6;
  const Report r = run_scenario(s, Executor(1));
  ASSERT_EQ(r.results.size(), 1u);
  EXPECT_EQ(r.results[0].status, Status::kFail);
  EXPECT_FALSE(r.pass());
  EXPECT_NE(report_json(r).find("\"verdict\": \"fail\""), std::string::npos);
}

TEST(Report, EmitErrors) {
  const Report r = run_scenario(small({"identity-s2"}, {"tension"}), Executor(1));
  EXPECT_EQ(kind_of([&] { emit(r, "json", "/nonexistent-dir/x.json"); }), ErrorKind::kIo);
  EXPECT_EQ(kind_of([&] { emit(r, "xml", "-"); }), ErrorKind::kRejectedInput);
  const std::string path = ::testing::TempDir() + "hjlab_report.csv";
  emit(r, "csv", path);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), report_csv(r));
  std::remove(path.c_str());
}

TEST(Report, FloatsUseSeventeenDigits) {
  const Report r = run_scenario(small({"identity-s2"}, {"tension"}), Executor(1));
  EXPECT_NE(report_json(r).find("\"tension\": 1.0000000000000001e-09"), std::string::npos);
}

TEST(Report, VeroneseFullSuite) {
  Scenario s;
  s.cases = {"veronese-s4"};
  s.checks = check_names();
  const Report r = run_scenario(s, Executor::from_env());
  for (const CheckResult& c : r.results) EXPECT_NE(c.status, Status::kFail) << c.check;
  EXPECT_TRUE(r.pass());
}

TEST(Report, ResolutionMonotonicity) {
  // Grid-max residuals of smooth cases do not grow under refinement beyond
  // a factor-2 noise band; rounding-level values get an absolute floor.
  Scenario lo;
  lo.cases = {"identity-s2", "rational-d3-cp1", "veronese-sequence-cp2"};
  lo.checks = {"tension", "conformality", "curvature-oracle"};
  Scenario hi = lo;
  hi.n_theta = 64;
  hi.n_phi = 128;
  const Report a = run_scenario(lo, Executor(1));
  const Report b = run_scenario(hi, Executor(1));
  ASSERT_EQ(a.results.size(), b.results.size());
  for (std::size_t i = 0; i < a.results.size(); ++i) {
    const auto& ca = a.results[i].components;
    const auto& cb = b.results[i].components;
    ASSERT_EQ(ca.size(), cb.size());
    for (std::size_t k = 0; k < ca.size(); ++k) {
      if (ca[k].kind != ComponentKind::kVanishing) continue;
      EXPECT_LE(cb[k].grid_max, 2.0 * ca[k].grid_max + 1e-14) << a.results[i].check << " " << ca[k].name;
    }
  }
}
