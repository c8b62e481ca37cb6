#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rie/cli.hpp"
#include "rie/csv.hpp"
#include "rie/estimators.hpp"
#include "support.hpp"

using namespace rie;
using nlohmann::json;
using rie::test::slurp;
using rie::test::spit;
using rie::test::temp_dir;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome rie_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "rie");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

json read_json(const std::filesystem::path& p) { return json::parse(slurp(p)); }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("clean: 1 x 2 input") {
    const auto dir = temp_dir("clean_small");
    spit(dir / "x.csv", "1,-1\n");
    const Outcome o = rie_cli({"clean", (dir / "x.csv").string(), "--out", (dir / "c.csv").string()});
    REQUIRE(o.code == 0);
    const json r = read_json(dir / "c.json");
    CHECK(r["q"].get<double>() == 0.5);
    CHECK(r["n"].get<int>() == 1);
    CHECK(r["T"].get<int>() == 2);
    CHECK(r["eta"].get<double>() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(r["eigenvalues"][0].get<double>() == doctest::Approx(1.0));
    // G = (1/2) / (i eta) = -i / sqrt(2), so |1 - q + G|^2 = 1/4 + 1/2
    CHECK(r["cleaned_eigenvalues"][0].get<double>() == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    const MatrixXd c = read_csv_matrix((dir / "c.csv").string());
    CHECK(c(0, 0) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    for (const char* key : {"n", "T", "q", "eta", "alpha", "centered", "trace_preserve", "eigenvalues",
                            "cleaned_eigenvalues", "trace_before", "trace_after", "degenerate_clusters"})
      CHECK_MESSAGE(r.contains(key), key);
  }

  TEST_CASE("clean: equal rows give a rank-one spectrum with zero cleaned values") {
    const auto dir = temp_dir("clean_rank1");
    spit(dir / "x.csv", "1,2,-1,0.5\n1,2,-1,0.5\n1,2,-1,0.5\n");
    REQUIRE(rie_cli({"clean", (dir / "x.csv").string(), "--out", (dir / "c.csv").string()}).code == 0);
    const json r = read_json(dir / "c.json");
    CHECK(r["eigenvalues"][1].get<double>() == 0.0);
    CHECK(r["eigenvalues"][2].get<double>() == 0.0);
    CHECK(r["cleaned_eigenvalues"][1].get<double>() == 0.0);
    CHECK(r["cleaned_eigenvalues"][2].get<double>() == 0.0);
    CHECK(r["cleaned_eigenvalues"][0].get<double>() > 0.0);
    CHECK(r["degenerate_clusters"].get<int>() == 1);
  }

  TEST_CASE("clean: simulated white noise narrows the eigenvalue spread") {
    const auto dir = temp_dir("clean_white");
    REQUIRE(rie_cli({"simulate", "--model", "identity", "--n", "100", "--T", "200", "--seed", "5", "--out",
                     (dir / "x.csv").string()})
                .code == 0);
    REQUIRE(rie_cli({"clean", (dir / "x.csv").string(), "--out", (dir / "c.csv").string()}).code == 0);
    const json r = read_json(dir / "c.json");
    const auto raw = r["eigenvalues"].get<std::vector<double>>();
    const auto cleaned = r["cleaned_eigenvalues"].get<std::vector<double>>();
    auto spread = [](const std::vector<double>& v) {
      return *std::max_element(v.begin(), v.end()) - *std::min_element(v.begin(), v.end());
    };
    CHECK(spread(cleaned) < spread(raw));
  }

  TEST_CASE("clean: input errors exit 2") {
    const auto dir = temp_dir("clean_errors");
    Outcome o = rie_cli({"clean", (dir / "missing.csv").string(), "--out", (dir / "c.csv").string()});
    CHECK(o.code == 2);

    spit(dir / "bad.csv", "1,2,3\n4,x,6\n");
    o = rie_cli({"clean", (dir / "bad.csv").string(), "--out", (dir / "c.csv").string()});
    CHECK(o.code == 2);
    CHECK(o.err.find("row 2") != std::string::npos);
    CHECK(o.err.find("column 2") != std::string::npos);

    spit(dir / "ragged.csv", "1,2,3\n4,5\n");
    CHECK(rie_cli({"clean", (dir / "ragged.csv").string(), "--out", (dir / "c.csv").string()}).code == 2);

    spit(dir / "ok.csv", "1,2,3\n4,5,6\n");
    CHECK(rie_cli({"clean", (dir / "ok.csv").string(), "--out", (dir / "c.csv").string(), "--alpha", "1.5"})
              .code == 2);
    CHECK(rie_cli({"clean", (dir / "ok.csv").string(), "--out", (dir / "c.csv").string(), "--eta", "0"}).code ==
          2);
    CHECK(rie_cli({"clean", (dir / "ok.csv").string()}).code == 2);
    CHECK(rie_cli({"frobnicate"}).code == 2);
    CHECK(rie_cli({"--help"}).code == 0);
  }

  TEST_CASE("clean: n > T is a warning, not an error") {
    const auto dir = temp_dir("clean_wide");
    spit(dir / "x.csv", "1,2\n3,4\n5,7\n");
    const Outcome o = rie_cli({"clean", (dir / "x.csv").string(), "--out", (dir / "c.csv").string()});
    CHECK(o.code == 0);
    CHECK(o.err.find("warning") != std::string::npos);
  }

  TEST_CASE("clean: header row is detected and skipped") {
    const auto dir = temp_dir("clean_header");
    spit(dir / "a.csv", "t1,t2,t3\n1,2,3\n0,1,-1\n");
    spit(dir / "b.csv", "1,2,3\n0,1,-1\n");
    REQUIRE(rie_cli({"clean", (dir / "a.csv").string(), "--out", (dir / "a_out.csv").string()}).code == 0);
    REQUIRE(rie_cli({"clean", (dir / "b.csv").string(), "--out", (dir / "b_out.csv").string()}).code == 0);
    CHECK(slurp(dir / "a_out.json") == slurp(dir / "b_out.json"));
  }

  TEST_CASE("clean: transpose flag gives identical reports") {
    const auto dir = temp_dir("clean_transpose");
    REQUIRE(rie_cli({"simulate", "--model", "toeplitz:0.3", "--n", "7", "--T", "19", "--seed", "3", "--out",
                     (dir / "x.csv").string()})
                .code == 0);
    REQUIRE(rie_cli({"simulate", "--model", "toeplitz:0.3", "--n", "7", "--T", "19", "--seed", "3", "--transpose",
                     "--out", (dir / "xt.csv").string()})
                .code == 0);
    REQUIRE(rie_cli({"clean", (dir / "x.csv").string(), "--out", (dir / "a.csv").string()}).code == 0);
    REQUIRE(rie_cli({"clean", (dir / "xt.csv").string(), "--transpose", "--out", (dir / "b.csv").string()}).code ==
            0);
    CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
    CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  }

  TEST_CASE("clean: centering has no effect on centered data") {
    const auto dir = temp_dir("clean_center");
    spit(dir / "x.csv", "1,-1,2,-2\n0.5,0.5,-0.5,-0.5\n3,-1,-1,-1\n");
    REQUIRE(rie_cli({"clean", (dir / "x.csv").string(), "--out", (dir / "a.csv").string()}).code == 0);
    REQUIRE(rie_cli({"clean", (dir / "x.csv").string(), "--center", "--out", (dir / "b.csv").string()}).code == 0);
    const MatrixXd a = read_csv_matrix((dir / "a.csv").string());
    const MatrixXd b = read_csv_matrix((dir / "b.csv").string());
    CHECK((a - b).norm() < 1e-12);
    CHECK(read_json(dir / "b.json")["centered"].get<bool>());

    spit(dir / "y.csv", "5,6,7,8\n1,2,1,2\n");
    REQUIRE(rie_cli({"clean", (dir / "y.csv").string(), "--out", (dir / "c.csv").string()}).code == 0);
    REQUIRE(rie_cli({"clean", (dir / "y.csv").string(), "--center", "--out", (dir / "d.csv").string()}).code == 0);
    CHECK(read_json(dir / "c.json")["trace_before"].get<double>() >
          read_json(dir / "d.json")["trace_before"].get<double>());
  }

  TEST_CASE("clean: trace-preserve and q override") {
    const auto dir = temp_dir("clean_trace");
    REQUIRE(rie_cli({"simulate", "--model", "spiked:5", "--n", "20", "--T", "50", "--out", (dir / "x.csv").string()})
                .code == 0);
    REQUIRE(rie_cli({"clean", (dir / "x.csv").string(), "--trace-preserve", "--q", "0.3", "--report",
                     (dir / "r.json").string(), "--out", (dir / "c.csv").string()})
                .code == 0);
    const json r = read_json(dir / "r.json");
    CHECK(r["q"].get<double>() == 0.3);
    CHECK(r["trace_preserve"].get<bool>());
    const double before = r["trace_before"].get<double>();
    CHECK(std::abs(r["trace_after"].get<double>() - before) <= 1e-10 * before);
  }

  TEST_CASE("round trip: simulate, clean, reread equals assemble") {
    const auto dir = temp_dir("round_trip");
    REQUIRE(rie_cli({"simulate", "--model", "toeplitz:0.6", "--n", "15", "--T", "40", "--seed", "11", "--out",
                     (dir / "x.csv").string()})
                .code == 0);
    REQUIRE(rie_cli({"clean", (dir / "x.csv").string(), "--out", (dir / "c.csv").string()}).code == 0);
    const MatrixXd x = read_csv_matrix((dir / "x.csv").string());
    const EigenSystem es = eig_covariance(empirical_covariance(x));
    const SymmetricMatrix expected = assemble(es, lp_clean(es, 40));
    CHECK((read_csv_matrix((dir / "c.csv").string()) - expected.matrix()).norm() <= 1e-9);
  }

  TEST_CASE("simulate: deterministic, Sigma CSVs, and errors") {
    const auto dir = temp_dir("simulate");
    const std::vector<std::string> base{"simulate", "--model", "identity", "--n", "2", "--T", "3", "--seed", "42"};
    auto with_out = [&](const std::string& name) {
      auto a = base;
      a.push_back("--out");
      a.push_back((dir / name).string());
      return a;
    };
    REQUIRE(rie_cli(with_out("a.csv")).code == 0);
    REQUIRE(rie_cli(with_out("b.csv")).code == 0);
    CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
    const MatrixXd a = read_csv_matrix((dir / "a.csv").string());
    CHECK(a.rows() == 2);
    CHECK(a.cols() == 3);

    REQUIRE(rie_cli({"simulate", "--model", "toeplitz:0.5", "--n", "2", "--T", "3", "--out",
                     (dir / "t.csv").string(), "--sigma-out", (dir / "ts.csv").string()})
                .code == 0);
    MatrixXd expected(2, 2);
    expected << 1, 0.5, 0.5, 1;
    CHECK(read_csv_matrix((dir / "ts.csv").string()) == expected);

    REQUIRE(rie_cli({"simulate", "--model", "spiked:10", "--n", "6", "--T", "3", "--out", (dir / "s.csv").string(),
                     "--sigma-out", (dir / "ss.csv").string()})
                .code == 0);
    const EigenSystem es = eig_sym(SymmetricMatrix(read_csv_matrix((dir / "ss.csv").string())));
    CHECK(std::abs(es.eigenvalues(0) - 11.0) <= 1e-8);

    CHECK(rie_cli({"simulate", "--model", "toeplitz:2", "--out", (dir / "e.csv").string()}).code == 2);
    CHECK(rie_cli({"simulate", "--model", "wishart", "--out", (dir / "e.csv").string()}).code == 2);
  }

  TEST_CASE("simulate: RIE_SEED is used when --seed is absent") {
    const auto dir = temp_dir("simulate_env");
    ::setenv("RIE_SEED", "42", 1);
    REQUIRE(rie_cli({"simulate", "--model", "identity", "--n", "2", "--T", "3", "--out", (dir / "env.csv").string()})
                .code == 0);
    ::unsetenv("RIE_SEED");
    REQUIRE(rie_cli({"simulate", "--model", "identity", "--n", "2", "--T", "3", "--seed", "42", "--out",
                     (dir / "flag.csv").string()})
                .code == 0);
    REQUIRE(rie_cli({"simulate", "--model", "identity", "--n", "2", "--T", "3", "--out", (dir / "dflt.csv").string()})
                .code == 0);
    CHECK(slurp(dir / "env.csv") == slurp(dir / "flag.csv"));
    CHECK(slurp(dir / "env.csv") != slurp(dir / "dflt.csv"));
  }

  TEST_CASE("verify: identities pass and write reports") {
    const auto dir = temp_dir("verify");
    const std::string prefix = (dir / "ids").string();
    const Outcome o = rie_cli({"verify", "--suite", "identities", "--trials", "20", "--seed", "3", "--out", prefix});
    CHECK(o.code == 0);
    CHECK(o.out.find("PASS identities") != std::string::npos);
    CHECK(o.out.find("FAIL") == std::string::npos);
    const json summary = read_json(prefix + ".summary.json");
    CHECK(summary["pass"].get<bool>());
    std::istringstream lines(slurp(prefix + ".jsonl"));
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) {
      const json j = json::parse(line);
      for (double r : j["identity_residual"].get<std::vector<double>>()) CHECK(r < 1e-12);
      ++count;
    }
    CHECK(count == 20);

    CHECK(rie_cli({"verify", "--suite", "nonsense", "--out", prefix}).code == 2);
  }

  TEST_CASE("verify: reruns are byte-identical, independent of job count") {
    const auto dir = temp_dir("verify_replay");
    const std::vector<std::string> args{"verify", "--suite", "theorem1", "--trials", "4", "--sizes", "20",
                                        "40", "--seed", "8"};
    auto run_with = [&](const std::string& name, const std::string& jobs) {
      auto a = args;
      a.insert(a.end(), {"--jobs", jobs, "--out", (dir / name).string()});
      return rie_cli(a);
    };
    run_with("a", "1");
    run_with("b", "1");
    run_with("c", "3");
    CHECK(slurp(dir / "a.jsonl") == slurp(dir / "b.jsonl"));
    CHECK(slurp(dir / "a.jsonl") == slurp(dir / "c.jsonl"));
    CHECK_FALSE(slurp(dir / "a.jsonl").empty());
  }

  TEST_CASE("spectrum: Lorentzian peak of a single eigenvalue") {
    const auto dir = temp_dir("spectrum_peak");
    spit(dir / "x.csv", "1\n");
    REQUIRE(rie_cli({"spectrum", "--input", (dir / "x.csv").string(), "--grid", "1:1:1", "--eta", "0.01", "--out",
                     (dir / "d.csv").string()})
                .code == 0);
    const MatrixXd d = read_csv_matrix((dir / "d.csv").string());
    REQUIRE(d.rows() == 1);
    CHECK(d(0, 0) == 1.0);
    CHECK(d(0, 1) == doctest::Approx(1.0 / (std::numbers::pi * 0.01)).epsilon(1e-12));
  }

  TEST_CASE("spectrum: empty grid and bad eta") {
    const auto dir = temp_dir("spectrum_edge");
    spit(dir / "x.csv", "1,2\n");
    CHECK(rie_cli({"spectrum", "--input", (dir / "x.csv").string(), "--grid", "0:1:0", "--out",
                   (dir / "d.csv").string()})
              .code == 0);
    CHECK(slurp(dir / "d.csv").empty());
    CHECK(rie_cli({"spectrum", "--input", (dir / "x.csv").string(), "--eta", "0", "--out", (dir / "e.csv").string()})
              .code == 2);
    CHECK(rie_cli({"spectrum", "--input", (dir / "x.csv").string(), "--eta", "-1", "--out", (dir / "e.csv").string()})
              .code == 2);
    CHECK(rie_cli({"spectrum", "--out", (dir / "e.csv").string()}).code == 2);
  }

  TEST_CASE("spectrum: white noise eigenvalues sit inside the limiting support") {
    const auto dir = temp_dir("spectrum_mp");
    REQUIRE(rie_cli({"simulate", "--model", "identity", "--n", "500", "--T", "1000", "--seed", "21", "--out",
                     (dir / "x.csv").string()})
                .code == 0);
    REQUIRE(rie_cli({"spectrum", "--input", (dir / "x.csv").string(), "--grid", "0:4:401", "--out",
                     (dir / "d.csv").string()})
                .code == 0);
    const MatrixXd d = read_csv_matrix((dir / "d.csv").string());
    CHECK(d.rows() == 401);
    const double eta = 1.0 / std::sqrt(1000.0);
    const double lo = std::pow(1 - std::sqrt(0.5), 2), hi = std::pow(1 + std::sqrt(0.5), 2);
    const EigenSystem es = eig_covariance(empirical_covariance(read_csv_matrix((dir / "x.csv").string())));
    const auto inside = (es.eigenvalues.array() >= lo - 5 * eta && es.eigenvalues.array() <= hi + 5 * eta).count();
    CHECK(inside >= 495);
    // Density mass far outside the support is small.
    double outside = 0.0, total = 0.0;
    for (Index i = 0; i < d.rows(); ++i) {
      total += d(i, 1) * 0.01;
      if (d(i, 0) > hi + 0.3) outside += d(i, 1) * 0.01;
    }
    CHECK(outside < 0.02 * total);
  }
}
