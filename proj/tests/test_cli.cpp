#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {
struct Sandbox {
  fs::path dir;
  explicit Sandbox(const std::string& name) : dir(fs::temp_directory_path() / ("curvtrack-cli-" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Sandbox() { fs::remove_all(dir); }

  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(dir / name) << text;
    return dir / name;
  }
  std::string read(const std::string& name) const {
    std::ifstream in(dir / name, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }
  int run(const std::string& args) const {
    const std::string cmd = std::string(CURVTRACK_CLI) + " " + args + " --out " + dir.string() + " > " +
                            (dir / "stdout.txt").string() + " 2> " + (dir / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
};

const char* kSphere = R"(command = chern
[manifold]
kind = sphere
delta1_over_2pi_mhz = 1.735
omega1_over_2pi_mhz = 1.735
[protocol]
tau_us = 1
)";
}  // namespace

TEST_CASE("sphere chern run") {
  Sandbox box("sphere");
  const auto cfg = box.write("s.cfg", kSphere);
  REQUIRE(box.run("chern --config " + cfg.string()) == 0);
  const std::string csv = box.read("chern.csv");
  CHECK(csv.starts_with("# curvtrack v1\n# delta2_over_delta1,chern_dyn,chern_conv,euler,flag\n"));
  std::istringstream rows(csv);
  std::string line;
  std::getline(rows, line);
  std::getline(rows, line);
  std::getline(rows, line);
  std::vector<std::string> cells;
  std::stringstream ss(line);
  for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
  REQUIRE(cells.size() == 5);
  CHECK(cells[2] == "1.00000000");
  CHECK(cells[3] == "2.00000000");
  CHECK(cells[4] == "0");
}

TEST_CASE("same config twice gives identical bytes") {
  Sandbox box("twice");
  const auto cfg = box.write("m.cfg", R"(command = map
[manifold]
kind = torus
delta1_over_2pi_mhz = 1.735
omega1_over_2pi_mhz = 1.735
[protocol]
tau_us = 1
[sweep]
delta2_over_delta1_min = -1.5
delta2_over_delta1_max = 1.5
points = 7
[grid]
n_theta = 41
[output]
path = a.csv
)");
  REQUIRE(box.run("map -c " + cfg.string()) == 0);
  const std::string first = box.read("a.csv");
  REQUIRE(box.run("map -c " + cfg.string() + " --threads 3 --seed 17") == 0);
  CHECK(box.read("a.csv") == first);
  CHECK(!first.empty());
}

TEST_CASE("exit codes") {
  Sandbox box("codes");
  // missing tau
  const auto bad = box.write("bad.cfg", "command = chern\nmanifold.delta1_over_2pi_mhz = 1\n"
                                        "manifold.omega1_over_2pi_mhz = 1\n");
  CHECK(box.run("chern -c " + bad.string()) == 2);
  CHECK(box.read("stderr.txt").find("protocol.tau_us") != std::string::npos);
  CHECK(box.run("chern -c " + (box.dir / "nope.cfg").string()) == 2);
  CHECK(box.run("teleport -c " + bad.string()) == 2);

  // command in the file disagrees with the command line
  const auto sphere = box.write("s.cfg", kSphere);
  CHECK(box.run("evolve -c " + sphere.string()) == 2);

  // the ramp starts on the degeneracy, so there is no ground state to prepare
  const auto degenerate = box.write("d.cfg", R"(command = curvature
[manifold]
kind = torus
delta1_over_2pi_mhz = 1.735
omega1_over_2pi_mhz = 1.735
delta2_over_delta1 = -1
[protocol]
tau_us = 1
)");
  CHECK(box.run("curvature -c " + degenerate.string()) == 1);
  CHECK(!fs::exists(box.dir / "curvature.csv"));
}
