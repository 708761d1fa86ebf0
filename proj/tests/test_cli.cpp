#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(SLOTFAIR_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class Workdir {
 public:
  Workdir() {
    dir_ = fs::temp_directory_path() / ("slotfair_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  ~Workdir() { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) const {
    fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

 private:
  fs::path dir_;
};

std::string economy(const std::vector<std::string>& deltas) {
  std::string s = R"({"agents":[)";
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (i) s += ",";
    s += R"({"name":"a)" + std::to_string(i + 1) + R"(","utility":{"kind":"geometric","delta":")" + deltas[i] + R"("}})";
  }
  return s + "]}";
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli check") {
  Workdir w;
  Run r = run("check " + w.write("e.json", economy({"5/6", "5/6", "5/6"})));
  CHECK(r.code == 0);
  CHECK(r.out.find("5-Kakeya") != std::string::npos);
  CHECK(r.out.find("proportional (Kakeya >= 3): PASS") != std::string::npos);

  Run bad = run("check " + w.write("bad.json", economy({"6/5"})));
  CHECK(bad.code == 10);
  Run broken = run("check " + w.write("broken.json", "{\"agents\": ["));
  CHECK(broken.code == 10);
  Run slow = run("allocate " + w.write("slow.json", economy({"2/3", "2/3", "2/3"})) + " --method ica");
  CHECK(slow.code == 40);
  CHECK(run("frobnicate").code == 3);
}

TEST_CASE("cli allocate round robin and proportional trace") {
  Workdir w;
  std::string e = w.write("e.json", economy({"5/6", "5/6", "5/6"}));
  Run rr = run("allocate " + e + " --method round-robin");
  REQUIRE(rr.code == 0);
  auto j = nlohmann::json::parse(rr.out);
  CHECK(j["method"] == "round-robin");
  CHECK(j["shares"][0]["schedule"]["period"] == 3);

  Run pr = run("allocate " + e + " --method proportional --trace --precision 1/1000000000000");
  REQUIRE(pr.code == 0);
  auto p = nlohmann::json::parse(pr.out);
  REQUIRE(p.contains("trace"));
  int assigned = 0;
  for (const auto& st : p["trace"]) assigned += st["mode"] == "single_flag";
  CHECK(assigned <= 2);
}

TEST_CASE("cli verify verdicts and exit codes") {
  Workdir w;
  std::string two = w.write("two.json", economy({"199/200", "199/200"}));
  std::string rr = w.path("rr.json");
  REQUIRE(run("allocate " + two + " --method round-robin -o " + rr).code == 0);
  CHECK(run("verify " + two + " " + rr + " --property envy-free").code == 1);

  std::string dc = w.path("dc.json");
  REQUIRE(run("allocate " + two + " --method divide-choose -o " + dc).code == 0);
  Run v = run("verify " + two + " " + dc + " --property envy-free");
  CHECK(v.code == 0);
  CHECK(nlohmann::json::parse(v.out)["verdict"] == "certified_pass");

  std::string three = w.write("three.json", economy({"199/200", "399/400", "995/1000"}));
  std::string sc = w.path("sc.json");
  REQUIRE(run("allocate " + three + " --method selfridge-conway -o " + sc).code == 0);
  CHECK(run("verify " + three + " " + sc + " --property proportional").code == 0);

  CHECK(run("verify " + two + " " + sc).code == 11);
  // Same names, different utilities: judged on the exported prefixes.
  std::string other = w.write("other.json", economy({"1/2", "1/2", "1/2"}));
  CHECK(run("verify " + other + " " + sc).code == 1);
}

TEST_CASE("cli bounds") {
  Run d = run("bounds --cuts 5");
  CHECK(d.code == 0);
  CHECK(d.out == "d(5) = 161\n");
  CHECK(run("bounds --agents 1").out == "p(1) = d(1) = 1\n");
  CHECK(run("bounds --agents 2").out.find("2·3^(2^(2^65536)−1) − 1") != std::string::npos);
  CHECK(run("bounds --agents 3 --numeric").code == 50);
}

TEST_CASE("cli output is deterministic and round-trips") {
  Workdir w;
  std::string e = w.write("e.json", economy({"4/5", "9/10"}));
  std::string a1 = w.path("a1.json"), a2 = w.path("a2.json");
  REQUIRE(run("allocate " + e + " --method proportional -o " + a1).code == 0);
  REQUIRE(run("allocate " + e + " --method proportional -o " + a2).code == 0);
  CHECK(slurp(a1) == slurp(a2));
  Run v1 = run("verify " + e + " " + a1);
  Run v2 = run("verify " + e + " " + a2);
  CHECK(v1.code == 0);
  CHECK(v1.out == v2.out);
}
