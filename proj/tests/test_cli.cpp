#include "doctest.h"

#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "crk");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = crk::cli::run(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("crk-cli-test-" + name);
  fs::remove_all(p);
  return p;
}

std::set<std::string> listing(const fs::path& dir) {
  std::set<std::string> s;
  for (const auto& e : fs::recursive_directory_iterator(dir)) s.insert(fs::relative(e.path(), dir).string());
  return s;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("even degree is rejected") {
  const fs::path d = scratch("even");
  for (const char* cmd : {"afem", "verify", "axioms"}) {
    const Result r = run({cmd, "--k", "2", "--out", d.string()});
    CHECK(r.code != 0);
    CHECK(r.err.find("k must be odd") != std::string::npos);
  }
  CHECK(!fs::exists(d));
}

TEST_CASE("invalid flags are rejected") {
  CHECK(run({"afem", "--theta", "0"}).code != 0);
  CHECK(run({"afem", "--problem", "circle"}).code != 0);
  CHECK(run({}).code != 0);
}

TEST_CASE("afem writes only into the output directory") {
  const fs::path d = scratch("afem");
  const auto before = listing(fs::current_path());
  const Result r = run({"afem", "--k", "1", "--dof-cap", "2000", "--out", d.string()});
  REQUIRE(r.code == 0);
  CHECK(listing(fs::current_path()) == before);
  CHECK(listing(d) == std::set<std::string>{"afem.csv", "estimate.csv", "rates.csv", "convergence.svg"});
  const std::string csv = slurp(d / "afem.csv");
  CHECK(csv.rfind("step,ndof,eta,mu,nu,nmarked,err_h1,seconds\n", 0) == 0);
  CHECK(slurp(d / "estimate.csv").rfind("tri_id,mu2,nu2,eta2\n", 0) == 0);
  CHECK(slurp(d / "rates.csv").rfind("quantity,window,slope\neta,", 0) == 0);
  const std::string svg = slurp(d / "convergence.svg");
  CHECK(svg.find("slope -0.3333") != std::string::npos);
  CHECK(svg.find("slope -0.5") != std::string::npos);
  CHECK(svg.find("stroke-dasharray") != std::string::npos);
  // the last line is the first step above the cap
  std::istringstream is(csv);
  std::string line, last;
  while (std::getline(is, line)) last = line;
  CHECK(std::stoi(last.substr(last.find(',') + 1)) > 2000);
}

TEST_CASE("repeated runs give identical files") {
  for (const std::vector<std::string>& cmd :
       {std::vector<std::string>{"verify", "--k", "3", "--seed", "7"},
        std::vector<std::string>{"afem", "--k", "3", "--problem", "square-smooth", "--dof-cap", "500"},
        std::vector<std::string>{"axioms", "--steps", "3"}}) {
    const fs::path a = scratch("det-a"), b = scratch("det-b");
    auto ca = cmd, cb = cmd;
    ca.insert(ca.end(), {"--out", a.string()});
    cb.insert(cb.end(), {"--out", b.string()});
    const Result ra = run(ca), rb = run(cb);
    REQUIRE(ra.code == 0);
    REQUIRE(rb.code == 0);
    CHECK(ra.out == rb.out);
    REQUIRE(listing(a) == listing(b));
    for (const auto& f : listing(a)) CHECK(slurp(a / f) == slurp(b / f));
  }
}

TEST_CASE("verify reports and axioms schema") {
  const fs::path d = scratch("verify");
  const Result r = run({"verify", "--k", "1", "--out", d.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
  CHECK(r.out.find("biduality") != std::string::npos);
  const Result a = run({"axioms", "--steps", "2", "--out", d.string()});
  CHECK(a.code == 0);
  const std::string csv = slurp(d / "axioms.csv");
  CHECK(csv.rfind("step,lambda1,lambda2,lambda3\n0,", 0) == 0);
}
