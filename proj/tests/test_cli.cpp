#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

using Json = nlohmann::ordered_json;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
  std::vector<Json> records() const {
    std::vector<Json> r;
    std::istringstream in(out);
    for (std::string line; std::getline(in, line);) r.push_back(Json::parse(line));
    return r;
  }
  Json manifest() const { return Json::parse(err.substr(err.rfind('\n', err.size() - 2) + 1)); }
};

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string temp_path(const char* tag) {
  return "/tmp/primelab_cli_test_" + std::to_string(::getpid()) + "_" + tag;
}

Run run(const std::string& args, const std::string& env = "") {
  const std::string out = temp_path("out"), err = temp_path("err");
  const std::string cmd = env + (env.empty() ? "" : " ") + PRIMELAB_CLI_PATH + " " + args + " >" + out + " 2>" + err;
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  std::remove(out.c_str());
  std::remove(err.c_str());
  return r;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cells.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cells.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.emplace_back();
    } else {
      cells.back() += c;
    }
  }
  return cells;
}

void flatten(const Json& v, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (v.is_object()) {
    for (auto it = v.begin(); it != v.end(); ++it) flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    return;
  }
  std::string text;
  if (v.is_string()) {
    text = v.get<std::string>();
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) text += (i ? ";" : "") + (v[i].is_string() ? v[i].get<std::string>() : v[i].dump());
  } else if (!v.is_null()) {
    text = v.dump();
  }
  out.emplace_back(prefix, text);
}

}  // namespace

TEST_CASE("worked examples") {
  auto r = run("tuple --check 0,2,4");
  REQUIRE(r.code == 0);
  auto rec = r.records().at(0);
  CHECK(rec["admissible"] == false);
  CHECK(rec["witness"] == 3);

  r = run("series --tuple 0,2");
  REQUIRE(r.code == 0);
  CHECK(r.records()[0]["value"].get<double>() == doctest::Approx(1.3203236).epsilon(1e-6));

  r = run("gallagher --tuple 0 --hmax 2");
  CHECK(r.records()[0]["average"].get<double>() == doctest::Approx(0.66016).epsilon(1e-4));

  r = run("weights --tuple 0 --R 3 --ell 0 --n 6");
  CHECK(r.records()[0]["lambda"].get<double>() == doctest::Approx(std::log(2.0)));

  r = run("ratios --limit 20");
  rec = r.records()[0];
  CHECK(rec["min_ratio"]["value"] == 0.5);
  CHECK(rec["max_ratio"]["value"] == 2.0);

  r = run("polignac --limit 100 --max-even 6 --kind strong");
  const auto rows = r.records();
  REQUIRE(rows.size() == 3);
  CHECK(rows[0]["strong"] == 8);
  CHECK(rows[2]["strong"] == 7);

  r = run("density --k 5");
  CHECK(r.records()[0]["numerator"] == "1");
  CHECK(r.records()[0]["denominator"] == "75");

  r = run("ap-search --limit 100");
  CHECK(r.records()[0]["terms"] == Json::array({5, 11, 17}));

  r = run("bv --X 10000 --Q 20 --summary");
  CHECK(r.records()[0]["conserved"] == true);

  r = run("sieve --limit 10^6 --count");
  CHECK(r.out.find("78498") != std::string::npos);
}

TEST_CASE("exit codes") {
  auto r = run("frobnicate");
  CHECK(r.code == 2);
  CHECK(r.err.find("unknown subcommand 'frobnicate'") != std::string::npos);
  CHECK(r.err.find("Usage") != std::string::npos);

  CHECK(run("").code == 2);
  CHECK(run("series --tuple 0,2,2").code == 2);
  CHECK(run("series --tuple 0,2 --bogus").code == 2);
  CHECK(run("gaps --limit 3 --stat mean").code == 2);
  CHECK(run("lemma1 --p 12").code == 2);

  r = run("sieve --limit 1e9", "PRIMELAB_MEMORY_BUDGET=4096");
  CHECK(r.code == 3);
  const Json m = r.manifest();
  CHECK(m["exit_code"] == 3);
  CHECK(m["error"].get<std::string>().find("PRIMELAB_MEMORY_BUDGET") != std::string::npos);

  CHECK(run("--version").code == 0);
}

TEST_CASE("manifest contents and determinism") {
  const auto a = run("constellations --tuple 0,2 --tuple 0,2,6 --limit 1000,100000");
  const auto b = run("--threads 3 constellations --tuple 0,2 --tuple 0,2,6 --limit 1000,100000");
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(a.out == b.out);
  const Json ma = a.manifest(), mb = b.manifest();
  for (const char* key : {"tool", "version", "subcommand", "params", "format", "threads", "argv", "exit_code",
                          "error", "records", "duration_seconds", "checksums"}) {
    CHECK_MESSAGE(ma.contains(key), key);
  }
  CHECK(ma["records"] == 4);
  CHECK(ma["checksums"]["params_sha256"] == mb["checksums"]["params_sha256"]);
  CHECK(ma["checksums"]["output_sha256"] == mb["checksums"]["output_sha256"]);
  CHECK(mb["threads"] == 3);

  const std::string path = temp_path("manifest.json");
  const auto c = run("--manifest " + path + " ratios --limit 1000");
  REQUIRE(c.code == 0);
  CHECK(c.err.empty());
  const Json mc = Json::parse(slurp(path));
  std::remove(path.c_str());
  CHECK(mc["subcommand"] == "ratios");
  CHECK(mc["params"]["limit"] == "1000");
}

TEST_CASE("thread count does not change output") {
  for (const char* cmd : {"gaps --limit 1e6 --stat max", "bv --X 1e5 --Q 40", "lemma1 --N 20000 --pmin 5 --pmax 40",
                          "histogram --limit 1e6 --summary", "gallagher --tuple 0,2 --hmax 5000 --trunc 1e5",
                          "lemma3 --N 1e6"}) {
    const std::string shown = cmd;
    CAPTURE(shown);
    const auto one = run(std::string("--threads 1 ") + cmd);
    const auto four = run(std::string("--threads 4 ") + cmd);
    REQUIRE(one.code == 0);
    CHECK(one.out == four.out);
  }
}

TEST_CASE("csv and json carry the same fields") {
  for (const char* cmd : {"tuple --check 0,2,4", "tuple --narrow 8", "series --tuple 0,4,6", "weights --N 200",
                          "lemma1 --N 5000 --p 11,13", "lemma2 --N 5000", "lemma3 --N 10000", "gaps --limit 200",
                          "gaps --limit 1e5 --stat mean", "gaps --limit 1e5 --stat oscillation", "histogram --limit 1e4",
                          "histogram --limit 1e4 --summary", "ratios --limit 1e4", "polignac --limit 1000",
                          "density --k 40", "density --k 10^6", "constellations --tuple 0,2 --limit 1e4",
                          "dhl --N 1000", "dhl --N 1000 --summary", "consecutive --tuple 0,2,6 --i 2 --j 3 --N 1e4", "ap-search --limit 300",
                          "bv --X 1000 --Q 10", "bv --X 1000 --Q 10 --summary", "sieve --limit 50",
                          "sieve --factor 360"}) {
    const std::string shown = cmd;
    CAPTURE(shown);
    const auto j = run(cmd);
    const auto c = run(std::string("--format csv ") + cmd);
    REQUIRE(j.code == 0);
    REQUIRE(c.code == 0);
    const auto records = j.records();
    std::istringstream in(c.out);
    std::string line;
    REQUIRE(std::getline(in, line));
    const auto header = split_csv(line);
    std::size_t n = 0;
    while (std::getline(in, line)) {
      REQUIRE(n < records.size());
      std::vector<std::pair<std::string, std::string>> flat;
      flatten(records[n], "", flat);
      const auto cells = split_csv(line);
      REQUIRE(cells.size() == header.size());
      REQUIRE(flat.size() == header.size());
      for (std::size_t i = 0; i < flat.size(); ++i) {
        REQUIRE(flat[i].first == header[i]);
        REQUIRE(flat[i].second == cells[i]);
      }
      ++n;
    }
    CHECK(n == records.size());
  }
}

TEST_CASE("non-finite values are strings") {
  const auto r = run("histogram --limit 100 --range-hi inf --bins 1 --summary");
  REQUIRE(r.code == 0);
  CHECK(r.records()[0]["range_hi"] == "inf");
  const auto empty = run("histogram --limit 100 --function const:0 --summary");
  REQUIRE(empty.code == 0);
  CHECK(empty.records()[0]["value"].is_null());
  CHECK(empty.records()[0]["invalid"] == 24);
}
