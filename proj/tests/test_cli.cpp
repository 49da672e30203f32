// Exit-code and format contract of the krondet binary. The binary path
// arrives as argv[1] (or KRONDET_BIN); every test spawns real processes.
#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"
#include "krondet/closed_form.hpp"
#include "krondet/generator.hpp"
#include "krondet/instance_json.hpp"

namespace {

std::string g_binary;

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + g_binary + " " +
                          args + " 2>&1";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  while (std::fgets(buf, sizeof(buf), pipe)) r.output += buf;
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() /
         ("krondet_test_" + std::to_string(::getpid()) + "_" + name);
}

std::filesystem::path write_identity_instance() {
  const auto path = temp_file("identity.json");
  const auto inst =
      krondet::random_instance<double>(2, 2, 0, krondet::Profile::kIdentity);
  std::ofstream out(path);
  out << krondet::instance_to_json(inst).dump() << "\n";
  return path;
}

}  // namespace

TEST_SUITE("compute") {
  TEST_CASE("identity instance") {
    const auto path = write_identity_instance();
    const auto r = run_cli("compute " + path.string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("total:    sign=+1 log_abs=0") != std::string::npos);

    const auto j = run_cli("compute " + path.string() + " --json");
    CHECK(j.exit_code == 0);
    const auto parsed = nlohmann::json::parse(j.output);
    CHECK(parsed["total"]["sign"] == 1);
    CHECK(parsed["total"]["log_abs"] == 0.0);
    CHECK(parsed["value"] == 1.0);
    CHECK(parsed["overflow"] == false);
    std::filesystem::remove(path);
  }

  TEST_CASE("singular factors are named") {
    const auto path = temp_file("singular.json");
    const auto inst = krondet::random_instance<double>(
        2, 2, 4, krondet::Profile::kSingularX);
    std::ofstream(path) << krondet::instance_to_json(inst).dump();
    const auto r = run_cli("compute " + path.string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("zero factors: X") != std::string::npos);
    std::filesystem::remove(path);
  }

  TEST_CASE("breakdown matches the library on the seed-42 instance") {
    const auto inst =
        krondet::random_instance<double>(3, 2, 42, krondet::Profile::kUniform);
    const auto path = temp_file("seed42.json");
    std::ofstream(path) << krondet::instance_to_json(inst).dump();
    const auto r = run_cli("compute " + path.string() + " --json");
    REQUIRE(r.exit_code == 0);
    const auto parsed = nlohmann::json::parse(r.output);
    const auto bd = krondet::closed_form_det(inst);
    CHECK(parsed["total"]["sign"] == bd.total.sign());
    CHECK(parsed["total"]["log_abs"].get<double>() ==
          doctest::Approx(bd.total.log_abs()).epsilon(1e-15));
    CHECK(parsed["det_X"]["log_abs"].get<double>() ==
          doctest::Approx(bd.det_x.log_abs()).epsilon(1e-15));
    REQUIRE(parsed["det_A"].size() == 3);
    std::filesystem::remove(path);
  }

  TEST_CASE("exact mode reports the rational value") {
    const auto path = temp_file("exact.json");
    std::ofstream(path) << R"({"F":1,"N":1,"A":[[["2/3"]]],"X":[["1/2"]],"Y":[["5"]]})";
    const auto r = run_cli("compute " + path.string() + " --mode exact --json");
    REQUIRE(r.exit_code == 0);
    const auto parsed = nlohmann::json::parse(r.output);
    CHECK(parsed["value"] == "5/3");  // 2/3 * (1/2 * 5)^1
    std::filesystem::remove(path);
  }

  TEST_CASE("parse and validation exit codes") {
    const auto bad = temp_file("bad.json");
    std::ofstream(bad) << "{ not json";
    CHECK(run_cli("compute " + bad.string()).exit_code == 2);
    std::filesystem::remove(bad);

    const auto mis = temp_file("mismatch.json");
    std::ofstream(mis) << R"({"F":2,"N":2,"A":[[[1]],[[1]]],)"
                       << R"("X":[[1,0],[0,1]],"Y":[[1,0],[0,1]]})";
    CHECK(run_cli("compute " + mis.string()).exit_code == 3);
    std::filesystem::remove(mis);

    CHECK(run_cli("compute /nonexistent.json").exit_code == 2);
  }
}

TEST_SUITE("verify") {
  TEST_CASE("file and generator specs pass") {
    const auto path = write_identity_instance();
    CHECK(run_cli("verify " + path.string()).exit_code == 0);
    std::filesystem::remove(path);

    const auto sweep =
        run_cli("verify --n 4 --f 3 --seed 0 --count 20 --profile uniform");
    CHECK(sweep.exit_code == 0);
    CHECK(sweep.output.find("all passed") != std::string::npos);

    CHECK(run_cli("verify --n 3 --f 2 --seed 0 --count 10 "
                  "--profile integer_small --mode exact")
              .exit_code == 0);
  }

  TEST_CASE("corrupt probe fails with exit code 1") {
    const auto r = run_cli(
        "verify --n 2 --f 2 --seed 1 --profile identity --mode exact --corrupt");
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("FAIL") != std::string::npos);
  }

  TEST_CASE("missing generator spec is a validation error") {
    CHECK(run_cli("verify").exit_code == 3);
  }

  TEST_CASE("cap handling") {
    CHECK(run_cli("verify --n 3 --f 2 --cap 4").exit_code == 4);
    // Environment variable sets the cap; the flag wins over it.
    CHECK(run_cli("verify --n 3 --f 2", "KRONDET_DENSE_CAP=4").exit_code == 4);
    CHECK(run_cli("verify --n 3 --f 2 --cap 64", "KRONDET_DENSE_CAP=4")
              .exit_code == 0);
    CHECK(run_cli("verify --n 3 --f 2", "KRONDET_DENSE_CAP=bogus").exit_code == 3);
  }

  TEST_CASE("json report") {
    const auto r = run_cli("verify --n 3 --f 2 --seed 42 --json");
    CHECK(r.exit_code == 0);
    const auto parsed = nlohmann::json::parse(r.output);
    CHECK(parsed["pass"] == true);
    CHECK(parsed["reports"].size() == 1);
    CHECK(parsed["reports"][0]["sign_match"] == true);
  }
}

TEST_SUITE("expand") {
  TEST_CASE("all checks pass on a small exact instance") {
    const auto r = run_cli("expand --n 3 --f 2 --seed 1");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("check=sumdiag PASS count=36") != std::string::npos);
    CHECK(r.output.find("check=full-leibniz PASS") != std::string::npos);
  }

  TEST_CASE("trivial single-tuple case") {
    const auto r = run_cli("expand --n 1 --f 1 --seed 0");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("count=1") != std::string::npos);
  }

  TEST_CASE("13824 tuples for N=4, F=3") {
    const auto r = run_cli("expand --n 4 --f 3 --seed 2 --checks sumdiag");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("count=13824") != std::string::npos);
  }

  TEST_CASE("limits exit with code 4") {
    CHECK(run_cli("expand --n 3 --f 2 --checks sumdiag --limit 35").exit_code == 4);
    // dim 12 is beyond the Leibniz expansion limit
    CHECK(run_cli("expand --n 4 --f 3 --checks full-leibniz").exit_code == 4);
  }

  TEST_CASE("unknown check is a validation error") {
    CHECK(run_cli("expand --n 2 --f 2 --checks bogus").exit_code == 3);
  }
}

TEST_SUITE("generate") {
  TEST_CASE("output re-parses to the library instance") {
    const auto r = run_cli("generate --n 3 --f 2 --seed 9 --profile uniform");
    CHECK(r.exit_code == 0);
    const auto inst = krondet::parse_instance_text<double>(r.output);
    CHECK(inst == krondet::random_instance<double>(
                      3, 2, 9, krondet::Profile::kUniform));
  }

  TEST_CASE("exact mode writes ratio strings that round trip") {
    const auto path = temp_file("gen_exact.json");
    CHECK(run_cli("generate --n 2 --f 2 --seed 3 --profile uniform "
                  "--mode exact -o " +
                  path.string())
              .exit_code == 0);
    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    const auto inst = krondet::parse_instance_text<mpq_class>(text);
    CHECK(inst == krondet::random_instance<mpq_class>(
                      2, 2, 3, krondet::Profile::kUniform));
    std::filesystem::remove(path);
  }
}

TEST_SUITE("bench") {
  TEST_CASE("csv shape") {
    const auto r = run_cli("bench --sizes 2,4 --reps 1");
    CHECK(r.exit_code == 0);
    CHECK(r.output.rfind("N,F,NF,t_closed_ns,t_dense_ns,speedup\n", 0) == 0);
    int lines = 0;
    for (char c : r.output) {
      if (c == '\n') ++lines;
    }
    CHECK(lines == 3);  // header + two rows
    CHECK(r.output.find("2,2,4,") != std::string::npos);
    CHECK(r.output.find("4,4,16,") != std::string::npos);
  }

  TEST_CASE("json rows") {
    const auto r = run_cli("bench --sizes 2 --reps 2 --json");
    CHECK(r.exit_code == 0);
    const auto parsed = nlohmann::json::parse(r.output);
    REQUIRE(parsed.size() == 1);
    CHECK(parsed[0]["NF"] == 4);
  }
}

int main(int argc, char** argv) {
  if (argc > 1 && argv[1][0] != '-') {
    g_binary = argv[1];
    --argc;
    ++argv;
  } else if (const char* env = std::getenv("KRONDET_BIN")) {
    g_binary = env;
  }
  if (g_binary.empty()) {
    std::fprintf(stderr, "usage: test_cli <path-to-krondet> [doctest args]\n");
    return 1;
  }
  doctest::Context ctx;
  ctx.applyCommandLine(argc, argv);
  return ctx.run();
}
