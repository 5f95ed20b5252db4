#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "truncmom/cli.hpp"

using namespace truncmom;

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("complex literal parsing") {
  using cli_detail::parse_complex;
  REQUIRE(parse_complex("0.5") == std::complex<double>(0.5, 0.0));
  REQUIRE(parse_complex("-0.4") == std::complex<double>(-0.4, 0.0));
  REQUIRE(parse_complex("0.5+0.2i") == std::complex<double>(0.5, 0.2));
  REQUIRE(parse_complex("0.5-0.2i") == std::complex<double>(0.5, -0.2));
  REQUIRE(parse_complex("0.2i") == std::complex<double>(0.0, 0.2));
  REQUIRE(parse_complex("-i") == std::complex<double>(0.0, -1.0));
  REQUIRE(parse_complex("1e-2+1e-3i") == std::complex<double>(0.01, 0.001));
}

TEST_CASE("exact subcommand emits the pinned value") {
  const auto r = run({"exact", "--beta", "2", "--n", "4", "--m", "2", "-k",
                      "1", "--x", "0"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j["command"] == "exact");
  REQUIRE(j["value"].get<double>() == Catch::Approx(1.0 / 6.0).epsilon(1e-12));
  REQUIRE(j["method"] == "partition_series");
  REQUIRE(j["runtime_ms"] == 0);
  REQUIRE(j["params"]["beta"] == 2);
}

TEST_CASE("boundary subcommand: trivial anchor and group moments") {
  const auto r = run({"boundary", "--beta", "2", "--n", "1", "--m", "1",
                      "--gamma", "2"});
  REQUIRE(r.code == 0);
  REQUIRE(nlohmann::json::parse(r.out)["value"].get<double>() ==
          Catch::Approx(2.0).epsilon(1e-12));

  const auto g = run({"boundary", "--group", "Sp", "--dim", "1", "--gamma", "1"});
  REQUIRE(g.code == 0);
  REQUIRE(nlohmann::json::parse(g.out)["value"].get<double>() ==
          Catch::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("duality and mc subcommands cross-check") {
  const auto d = run({"duality", "--beta", "1", "--n", "4", "--m", "2", "-k",
                      "1", "--x", "0.5"});
  REQUIRE(d.code == 0);
  const double dual = nlohmann::json::parse(d.out)["value"].get<double>();

  const auto m = run({"mc", "--beta", "1", "--n", "4", "--m", "2", "-k", "1",
                      "--x", "0.5", "--samples", "40000", "--seed", "5"});
  REQUIRE(m.code == 0);
  const auto mj = nlohmann::json::parse(m.out);
  const double se = mj["stderr"].get<double>();
  REQUIRE(std::abs(mj["value"].get<double>() - dual) <= 4.0 * se);

  const auto odd = run({"duality", "--beta", "1", "--n", "1", "--m", "1",
                        "--odd", "-k", "1", "--x", "0.3"});
  REQUIRE(odd.code == 0);
  REQUIRE(nlohmann::json::parse(odd.out)["value"].get<double>() ==
          Catch::Approx(0.927).epsilon(1e-10));
}

TEST_CASE("clt subcommand emits a parameter table") {
  const auto r = run({"clt", "--beta", "4", "--regime", "weak"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  int rows = 0;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    REQUIRE(j["command"] == "clt");
    if (j["method"] == "e_beta")
      REQUIRE(j["value"].get<double>() == 0.5);
    if (j["method"] == "v_beta")
      REQUIRE(j["value"].get<double>() == 1.0);
    ++rows;
  }
  REQUIRE(rows == 4);

  const auto sweep = run({"clt", "--beta", "2", "--cumulant-order", "1",
                          "--kappa", "1", "--m-list", "10,100", "--boundary"});
  REQUIRE(sweep.code == 0);
  std::istringstream sl(sweep.out);
  rows = 0;
  while (std::getline(sl, line)) {
    REQUIRE(nlohmann::json::parse(line)["method"] == "polygamma_boundary");
    ++rows;
  }
  REQUIRE(rows == 2);
}

TEST_CASE("argument errors exit with code 2 and a diagnostic") {
  const auto bad_beta = run({"exact", "--beta", "3", "--n", "4", "--m", "2"});
  REQUIRE(bad_beta.code == 2);
  REQUIRE(bad_beta.err.find("--beta") != std::string::npos);

  const auto bad_trunc = run({"exact", "--beta", "2", "--n", "2", "--m", "5"});
  REQUIRE(bad_trunc.code == 2);
  REQUIRE(bad_trunc.err.find("M") != std::string::npos);

  const auto complex_real = run({"duality", "--beta", "1", "--n", "4", "--m",
                                 "2", "-k", "1", "--x", "0.5+0.2i"});
  REQUIRE(complex_real.code == 2);
  REQUIRE(complex_real.err.find("real") != std::string::npos);

  const auto no_sub = run({});
  REQUIRE(no_sub.code == 2);
}

TEST_CASE("byte-identical output for identical argv and seed") {
  const std::vector<std::string> argv{"mc",  "--beta", "2",    "--n",
                                      "4",   "--m",    "2",    "-k",
                                      "1",   "--x",    "0.3",  "--samples",
                                      "5000", "--seed", "42"};
  const auto a = run(argv);
  const auto b = run(argv);
  REQUIRE(a.code == 0);
  REQUIRE(a.out == b.out);

  // Thread count must not change the stream either.
  auto argv_t = argv;
  argv_t.insert(argv_t.begin(), {"--threads", "1"});
  auto argv_t8 = argv;
  argv_t8.insert(argv_t8.begin(), {"--threads", "8"});
  REQUIRE(run(argv_t).out == run(argv_t8).out);
}

TEST_CASE("csv export preserves the column order") {
  const auto r = run({"--format", "csv", "exact", "--beta", "2", "--n", "4",
                      "--m", "2", "-k", "1", "--x", "0.5+0.2i"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string header, row;
  std::getline(lines, header);
  REQUIRE(header ==
          "command,beta,n,m,order,x_re,x_im,value,stderr,method,runtime_ms");
  std::getline(lines, row);
  REQUIRE(row.substr(0, 6) == "exact,");
  REQUIRE(row.find(",partition_series,0") != std::string::npos);
}

TEST_CASE("validate --only runs a single criterion") {
  const auto r = run({"validate", "--only", "2"});
  REQUIRE(r.code == 0);
  REQUIRE(r.out.find("[PASS] criterion 2") != std::string::npos);
  REQUIRE(r.out.find("criterion 1") == std::string::npos);
}

TEST_CASE("help exits cleanly") {
  const auto r = run({"--help"});
  REQUIRE(r.code == 0);
  REQUIRE(r.out.find("exact") != std::string::npos);
}
