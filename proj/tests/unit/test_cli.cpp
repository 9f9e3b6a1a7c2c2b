#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "bachvol/bachvol.hpp"
#include "check.hpp"
#include "commands.hpp"

using namespace bachvol;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(const std::vector<std::string>& args, std::map<std::string, std::string> env = {}) {
  std::ostringstream out;
  std::ostringstream err;
  const cli::EnvLookup lookup = [env](const std::string& name) -> std::optional<std::string> {
    const auto it = env.find(name);
    if (it == env.end()) return std::nullopt;
    return it->second;
  };
  const int code = cli::run(args, out, err, lookup);
  return {code, out.str(), err.str()};
}

nlohmann::json run_json(std::vector<std::string> args) {
  args.insert(args.begin(), {"--format", "json"});
  const Outcome o = run_cli(args);
  REQUIRE_MESSAGE(o.code == 0, o.err);
  return nlohmann::json::parse(o.out);
}

struct TempFile {
  fs::path path;
  explicit TempFile(const std::string& name, const std::string& content = "")
      : path(fs::temp_directory_path() / ("bachvol_test_" + name)) {
    std::ofstream(path) << content;
  }
  ~TempFile() { fs::remove(path); }
};

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    rows.push_back(fields);
  }
  return rows;
}

}  // namespace

TEST_CASE("price command") {
  auto j = run_json({"price", "--spot", "100", "--strike", "100", "--maturity", "1", "--vol",
                     std::to_string(std::sqrt(2 * std::numbers::pi))});
  CHECK(j["price"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));

  j = run_json({"price", "--spot", "100", "--strike", "90", "--maturity", "1", "--vol", "10"});
  CHECK(j["price"].get<double>() == doctest::Approx(10.8331).epsilon(1e-5));
  CHECK_REL(j["time_value_gamma"].get<double>(), j["time_value"].get<double>(), 1e-13);

  j = run_json({"price", "--model", "black-scholes", "--spot", "100", "--strike", "100", "--maturity",
                "1", "--vol", "0.2"});
  CHECK(j["price"].get<double>() == doctest::Approx(7.9656).epsilon(1e-5));

  const Outcome text = run_cli({"price", "--spot", "100", "--strike", "90", "--maturity", "1", "--vol", "10"});
  CHECK(text.code == 0);
  CHECK(text.out.find("10.8332") != std::string::npos);

  const Outcome csv = run_cli(
      {"--format", "csv", "price", "--spot", "100", "--strike", "90", "--maturity", "1", "--vol", "10"});
  const auto rows = parse_csv(csv.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][0] == "model");
  CHECK(rows[1][0] == "bachelier");
}

TEST_CASE("validation errors exit with code 2") {
  Outcome o = run_cli({"price", "--spot", "-1", "--strike", "90", "--maturity", "1", "--vol", "10"});
  CHECK(o.code == 2);
  CHECK(o.err.find("error:") == 0);
  CHECK(std::count(o.err.begin(), o.err.end(), '\n') == 1);
  CHECK(run_cli({"price", "--spot", "100", "--strike", "90", "--maturity", "1"}).code == 2);
  CHECK(run_cli({"price", "--model", "heston", "--spot", "1", "--strike", "1", "--maturity", "1",
                 "--vol", "1"})
            .code == 2);
  CHECK(run_cli({"implied", "--spot", "100", "--strike", "90", "--maturity", "1", "--price", "9"}).code ==
        2);
  CHECK(run_cli({"bogus"}).code == 2);
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("implied command, single quote") {
  auto j = run_json({"implied", "--spot", "100", "--strike", "100", "--maturity", "1", "--price", "8"});
  CHECK(j["method"] == "exact-atm");
  CHECK_REL(j["normal_vol"].get<double>(), std::sqrt(2 * std::numbers::pi) * 8, 1e-15);

  // ln(TV/S) is about -163 here, so lambda is near 0.006.
  const OptionTerms terms(100, 120, 1.0 / 512);
  const double tv = bachelier_time_value(terms, NormalVol(26));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", tv);
  j = run_json({"implied", "--spot", "100", "--strike", "120", "--maturity", "0.001953125", "--time-value", buf,
                "--method", "asymptotic"});
  CHECK(j["method"] == "asymptotic");
  CHECK(j["lambda"].get<double>() < 0.01);
  CHECK(j["normal_vol"].get<double>() == doctest::Approx(26).epsilon(1e-3));

  j = run_json({"implied", "--spot", "100", "--strike", "120", "--maturity", "1", "--price", "2",
                "--method", "gamma"});
  CHECK(j["method"] == "gamma");
}

TEST_CASE("lambda-max: flag wins over the environment") {
  const std::vector<std::string> args{"--format", "json", "implied", "--spot", "100", "--strike", "120",
                                      "--maturity", "1", "--price", "0.5"};
  const double lambda = nlohmann::json::parse(run_cli(args).out)["lambda"].get<double>();
  REQUIRE(lambda > kDefaultLambdaMax);
  CHECK(nlohmann::json::parse(run_cli(args).out)["method"] == "exact");

  const auto env_raised = run_cli(args, {{"BACHVOL_LAMBDA_MAX", "0.9"}});
  CHECK(nlohmann::json::parse(env_raised.out)["method"] == "asymptotic");

  auto with_flag = args;
  with_flag.insert(with_flag.end(), {"--lambda-max", "0.01"});
  const auto flag_lowered = run_cli(with_flag, {{"BACHVOL_LAMBDA_MAX", "0.9"}});
  CHECK(nlohmann::json::parse(flag_lowered.out)["method"] == "exact");

  CHECK(run_cli(args, {{"BACHVOL_LAMBDA_MAX", "abc"}}).code == 2);
  CHECK(run_cli(args, {{"BACHVOL_LAMBDA_MAX", "-1"}}).code == 2);
}

TEST_CASE("implied batch round trip") {
  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> strike(60, 140);
  std::uniform_real_distribution<double> log_t(std::log(0.01), std::log(5.0));
  std::uniform_real_distribution<double> vol(2, 40);
  std::ostringstream csv;
  csv << "spot,strike,maturity,value,kind\n";
  std::vector<double> vols;
  char line[256];
  while (vols.size() < 1000) {
    const double k = strike(rng);
    const double t = std::exp(log_t(rng));
    const double s = vol(rng);
    const double price = bachelier_call(OptionTerms(100, k, t), NormalVol(s));
    // Keep prices that resolve the time value: normal doubles well above intrinsic.
    if (price < std::numeric_limits<double>::min() || price >= 100) continue;
    if (!(price - (k < 100 ? 100 - k : 0.0) > 1e-6 * price)) continue;
    std::snprintf(line, sizeof line, "100,%.17g,%.17g,%.17g,price\n", k, t, price);
    csv << line;
    vols.push_back(s);
  }
  csv << "100,100,1,8,price\n";
  csv << "100,90,1,5,price\n";
  csv << "100,abc,1,5,price\n";
  csv << "100,90,1,0.2,normal_vol\n";
  const TempFile input("implied.csv", csv.str());

  const Outcome o = run_cli({"--format", "csv", "implied", "--input", input.path.string(), "--method", "exact"});
  CHECK(o.code == 0);
  const auto rows = parse_csv(o.out);
  REQUIRE(rows.size() == vols.size() + 5);
  CHECK(rows[0] == std::vector<std::string>{"spot", "strike", "maturity", "value", "kind", "result",
                                            "method", "error"});
  double worst = 0;
  for (std::size_t i = 0; i < vols.size(); ++i) {
    REQUIRE(rows[i + 1].size() == 8);
    CHECK(rows[i + 1][7].empty());
    worst = std::max(worst, rel_diff(std::stod(rows[i + 1][5]), vols[i]));
  }
  CHECK(worst <= 1e-10);
  const auto& atm = rows[vols.size() + 1];
  CHECK(atm[6] == "exact-atm");
  CHECK(rows[vols.size() + 2][7].find("arbitrage") == 0);
  CHECK(rows[vols.size() + 3][7].find("parse") == 0);
  CHECK(rows[vols.size() + 4][7].find("kind=price") != std::string::npos);

  const Outcome again = run_cli({"--format", "csv", "implied", "--input", input.path.string(), "--method", "exact"});
  CHECK(again.out == o.out);
}

TEST_CASE("batch exit codes and output file") {
  const TempFile bad("bad.csv", "spot,strike,maturity,value,kind\n100,90,1,5,price\n100,90,1,200,price\n");
  CHECK(run_cli({"implied", "--input", bad.path.string()}).code == 3);
  const TempFile header("header.csv", "S,K,T,C\n100,90,1,12\n");
  CHECK(run_cli({"implied", "--input", header.path.string()}).code == 2);
  CHECK(run_cli({"implied", "--input", "/nonexistent/file.csv"}).code == 2);

  const TempFile out("out.json");
  const Outcome o = run_cli({"--format", "json", "--output", out.path.string(), "implied", "--spot", "100",
                             "--strike", "110", "--maturity", "1", "--price", "3"});
  CHECK(o.code == 0);
  CHECK(o.out.empty());
  std::ifstream in(out.path);
  const auto j = nlohmann::json::parse(in);
  CHECK(j["method"] == "exact");
}

TEST_CASE("convert command") {
  auto j = run_json({"convert", "--direction", "ln2n", "--order", "0", "--spot", "100", "--strike", "100",
                     "--maturity", "1", "--vol", "0.2"});
  CHECK_REL(j["normal_vol"].get<double>(), 20.0, 1e-15);
  CHECK(j["method"] == "order0");

  const OptionTerms terms(100, 120, 0.01);
  const double exact = exact_normal_from_lognormal(terms, LognormalVol(0.2)).value();
  const auto order = [&](const char* o) {
    return run_json({"convert", "--direction", "ln2n", "--order", o, "--spot", "100", "--strike", "120",
                     "--maturity", "0.01", "--vol", "0.2"})["normal_vol"]
        .get<double>();
  };
  CHECK(std::abs(order("1") - exact) < std::abs(order("0") - exact));
  CHECK_REL(order("exact"), exact, 1e-15);

  const double ln = run_json({"convert", "--direction", "n2ln", "--order", "0", "--spot", "100", "--strike",
                              "120", "--maturity", "1", "--vol", "20"})["lognormal_vol"]
                        .get<double>();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", ln);
  const double back = run_json({"convert", "--direction", "ln2n", "--order", "0", "--spot", "100", "--strike",
                                "120", "--maturity", "1", "--vol", buf})["normal_vol"]
                          .get<double>();
  CHECK_REL(back, 20.0, 1e-15);

  const TempFile input("convert.csv",
                       "spot,strike,maturity,value,kind\n100,120,1,0.2,lognormal_vol\n100,120,1,20,normal_vol\n");
  const Outcome o = run_cli({"convert", "--direction", "ln2n", "--order", "1", "--input", input.path.string()});
  CHECK(o.code == 0);
  const auto rows = parse_csv(o.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1][6] == "order1");
  CHECK(rows[2][7].find("lognormal_vol") != std::string::npos);
}

TEST_CASE("greeks command") {
  auto j = run_json({"greeks", "--spot", "100", "--strike", "100", "--maturity", "1", "--vol", "20"});
  CHECK(j["delta"].get<double>() == 0.5);
  CHECK_REL(j["breakeven"].get<double>(), 20.0, 1e-12);

  j = run_json({"greeks", "--spot", "100", "--strike", "100", "--maturity", "1", "--vol", "20", "--dt",
                "0.25"});
  CHECK_REL(j["breakeven"].get<double>(), 10.0, 1e-12);

  j = run_json({"greeks", "--model", "black-scholes", "--compare", "--spot", "100", "--strike", "120",
                "--maturity", "1e-4", "--vol", "0.2"});
  CHECK(j.contains("ratio_gamma"));
  CHECK_REL(j["limit_gamma"].get<double>(), 100 * std::log(100.0 / 120) / -20, 1e-14);
  CHECK(std::isfinite(j["ratio_gamma"].get<double>()));

  j = run_json({"greeks", "--compare", "--spot", "100", "--strike", "100", "--maturity", "1", "--vol", "20"});
  CHECK(j["limit_gamma"].get<double>() == 1.0);
}

TEST_CASE("smile command") {
  const Outcome o = run_cli({"smile"});
  CHECK(o.code == 0);
  const auto rows = parse_csv(o.out);
  REQUIRE(rows.size() == 203);
  CHECK(rows[0] == std::vector<std::string>{"m", "smile_shape", "breakeven_ratio"});
  bool saw_one = false;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i][1] == rows[i][2]);
    if (std::stod(rows[i][0]) == 1.0) {
      saw_one = true;
      CHECK(std::stod(rows[i][1]) == 1.0);
    }
  }
  CHECK(saw_one);
  const auto two = run_cli({"smile", "--m-min", "2", "--m-max", "3", "--steps", "1"});
  CHECK(parse_csv(two.out)[1][1].substr(0, 6) == "0.6931");
  CHECK(run_cli({"smile", "--m-min", "0", "--m-max", "3"}).code == 2);
  CHECK(run_cli({"smile", "--m-min", "3", "--m-max", "2"}).code == 2);
  CHECK(run_cli({"smile", "--steps", "0"}).code == 2);
  const auto j = nlohmann::json::parse(run_cli({"--format", "json", "smile", "--steps", "4"}).out);
  CHECK(j.is_array());
  CHECK(j.size() == 6);
}
