#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "doctest.h"
#include "lpfield/cli.hpp"
#include "lpfield/io.hpp"
#include "lpfield/psido.hpp"
#include "lpfield/registry.hpp"
#include "oracles.hpp"

using namespace lpfield;
using namespace lpfield::testing;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("lpfield_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  fs::path file(const std::string& name) const { return path / name; }
};

int run_cli(std::initializer_list<std::string> args) {
  std::vector<std::string> argv{"lpfield"};
  argv.insert(argv.end(), args.begin(), args.end());
  return cli::run(argv);
}

}  // namespace

TEST_CASE("grid function CSV round trip, both sides") {
  TempDir tmp;
  for (int d : {1, 2}) {
    GridSpec g(d, 4);
    GridFunction f = random_physical(g, 5);
    const fs::path p = tmp.file("f" + std::to_string(d) + ".csv");
    io::write_grid_function(p, f);
    GridFunction back = io::read_grid_function(p);
    CHECK(back.spec() == g);
    CHECK(back.side() == Side::physical);
    for (std::size_t i = 0; i < g.total(); ++i) CHECK(back[i] == f[i]);

    GridFunction fhat = forward_transform(f);
    const fs::path ph = tmp.file("fhat" + std::to_string(d) + ".csv");
    io::write_grid_function(ph, fhat);
    GridFunction bh = io::read_grid_function(ph);
    CHECK(bh.side() == Side::frequency);
    for (std::size_t i = 0; i < g.total(); ++i) CHECK(bh[i] == fhat[i]);
  }
}

TEST_CASE("outputs are write-once") {
  TempDir tmp;
  GridSpec g(1, 4);
  GridFunction f(g, Side::physical);
  const fs::path p = tmp.file("once.csv");
  io::write_grid_function(p, f);
  CHECK_THROWS_AS(io::write_grid_function(p, f), ContractError);
}

TEST_CASE("config files parse key=value with comments") {
  TempDir tmp;
  const fs::path p = tmp.file("run.cfg");
  {
    std::ofstream out(p);
    out << "# a comment\n";
    out << "p=2\n";
    out << "levels = 3,4,5\n";
    out << "\n";
  }
  auto cfg = io::read_config(p);
  CHECK(cfg.at("p") == "2");
  CHECK(cfg.at("levels") == "3,4,5");
  {
    std::ofstream out(p, std::ios::app);
    out << "broken line\n";
  }
  CHECK_THROWS_AS(io::read_config(p), ContractError);
}

TEST_CASE("g17 formatting round-trips doubles") {
  for (double v : {1.0 / 3.0, 2.5e-11, -0.0, 1e300, 123456.789}) {
    CHECK(std::stod(io::g17(v)) == v);
  }
}

TEST_CASE("symbol registry: canonical names") {
  GridSpec g(1, 6);
  Symbol ns = parse_symbol("ns:s=1", g);
  CHECK(ns({0, 0}, {3.0, 4.0}).real() > 0.0);
  Symbol c = parse_symbol("cmrho:m=-0.25,rho=0.5", g);
  CHECK(std::abs(std::abs(c({0, 0}, {8.0, 0.0})) -
                 std::pow(65.0, -0.125)) < 1e-12);
  Symbol prod = parse_symbol("product:[cmrho:m=0,rho=0.5]|[ns:s=1]", g);
  const Vec2 xi{5.0, 0.0};
  CHECK(std::abs(prod({0, 0}, xi) -
                 parse_symbol("cmrho:m=0,rho=0.5", g)({0, 0}, xi) *
                     parse_symbol("ns:s=1", g)({0, 0}, xi)) < 1e-14);
  CHECK(parse_symbol("one", g).x_independent());
  CHECK(!parse_symbol("tone:v0=3", g).x_independent());
  CHECK(parse_symbol("sk:k=3,m=0,rho=0.5", g).x_independent());
  CHECK(!parse_symbol("xmod:m=0,rho=0.5,J=4,seed=2", g).x_independent());

  CHECK_THROWS_AS(parse_symbol("nope", g), ContractError);
  CHECK_THROWS_AS(parse_symbol("ns:r=1", g), ContractError);
  CHECK_THROWS_AS(parse_symbol("cmrho:m=0,rho=junk", g), ContractError);
  CHECK_THROWS_AS(parse_symbol("product:bad", g), ContractError);
}

TEST_CASE("cli: apply matches the library path and validates inputs") {
  TempDir tmp;
  GridSpec g(1, 5);
  GridFunction f = random_physical(g, 31);
  const fs::path in = tmp.file("in.csv");
  io::write_grid_function(in, f);
  const fs::path out = tmp.file("out.csv");
  CHECK(run_cli({"apply", "--symbol", "ns:s=1", "--in", in.string(), "--out",
                 out.string()}) == 0);
  GridFunction got = io::read_grid_function(out);
  GridFunction want = apply(parse_symbol("ns:s=1", g), f);
  CHECK(rel_max_error(got, want) < 1e-15);

  // Unknown command and malformed values exit 1.
  CHECK(run_cli({"frobnicate"}) == 1);
  CHECK(run_cli({"apply", "--symbol", "nope", "--in", in.string(), "--out",
                 tmp.file("x.csv").string()}) == 1);
  // Collision detection: the same output path again is a validation error.
  CHECK(run_cli({"apply", "--symbol", "ns:s=1", "--in", in.string(), "--out",
                 out.string()}) == 1);
}

TEST_CASE("cli: norm command validates parameters with exit code 1") {
  TempDir tmp;
  GridSpec g(1, 5);
  GridFunction f = random_physical(g, 3);
  const fs::path in = tmp.file("f.csv");
  io::write_grid_function(in, f);
  CHECK(run_cli({"norm", "--in", in.string(), "--space", "F", "--p", "2",
                 "--q", "2", "--s", "0"}) == 0);
  CHECK(run_cli({"norm", "--in", in.string(), "--space", "F", "--p", "-1",
                 "--q", "2", "--s", "0"}) == 1);
  CHECK(run_cli({"norm", "--in", in.string(), "--space", "Z", "--p", "2",
                 "--q", "2", "--s", "0"}) == 1);
  CHECK(run_cli({"norm", "--in", tmp.file("missing.csv").string()}) == 1);
}

TEST_CASE("cli: config file mirrors flags") {
  TempDir tmp;
  const fs::path cfg = tmp.file("run.cfg");
  {
    std::ofstream out(cfg);
    out << "d=1\nK=8\np=2\nq=1\nt=1\nrho=0.5\nlevels=3,4,5,6\nseeds=2\n"
        << "seed0=9\nout=" << tmp.file("fit.csv").string() << "\n";
  }
  CHECK(run_cli({"sharpness", "--config", cfg.string()}) == 0);
  auto csv = io::read_csv(tmp.file("fit.csv"));
  CHECK(csv.preamble.at("K") == "8");
  CHECK(csv.preamble.at("seeds") == "2");
  CHECK(csv.rows.size() == 4 * 2);
  CHECK(csv.header ==
        std::vector<std::string>{"level", "seed", "input_pth", "output_pth"});
  // Explicit flags override the config file.
  const fs::path out2 = tmp.file("fit2.csv");
  CHECK(run_cli({"sharpness", "--config", cfg.string(), "--seeds", "3",
                 "--out", out2.string()}) == 0);
  CHECK(io::read_csv(out2).preamble.at("seeds") == "3");
}

TEST_CASE("cli: kernel command dumps the dense kernel with its stats") {
  TempDir tmp;
  const fs::path out = tmp.file("K.csv");
  CHECK(run_cli({"kernel", "--d", "1", "--K", "4", "--band", "3", "--symbol",
                 "cmrho:m=-0.25,rho=0.5", "--tau", "0", "--out",
                 out.string()}) == 0);
  auto csv = io::read_csv(out);
  CHECK(csv.preamble.count("max_abs") == 1);
  const std::size_t n = GridSpec(1, 4).total();
  CHECK(csv.rows.size() == n * n);
}

TEST_CASE("cli: identical runs produce byte-identical outputs") {
  TempDir tmp;
  const fs::path a = tmp.file("a.csv"), b = tmp.file("b.csv");
  for (const fs::path& p : {a, b}) {
    CHECK(run_cli({"probe", "--d", "1", "--K", "5", "--symbol", "ns:s=0",
                   "--family", "packets", "--n", "6", "--seed", "3", "--out",
                   p.string()}) == 0);
  }
  CHECK(io::files_byte_identical(a, b));
}

TEST_CASE("sequence coeffs CSV round trip") {
  TempDir tmp;
  SequenceCoeffs b(1, 4);
  b.set({2, {1, 0}}, cplx{0.25, -1.5});
  b.set({4, {13, 0}}, cplx{1.0 / 3.0, 0.0});
  const fs::path p = tmp.file("b.csv");
  io::write_sequence_coeffs(p, b);
  SequenceCoeffs back = io::read_sequence_coeffs(p);
  CHECK(back.dim() == 1);
  CHECK(back.max_level() == 4);
  CHECK(back.get({2, {1, 0}}) == b.get({2, {1, 0}}));
  CHECK(back.get({4, {13, 0}}) == b.get({4, {13, 0}}));
  CHECK(back.entries().size() == b.entries().size());
}
