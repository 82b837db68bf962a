#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nslab/error.hpp"
#include "nslab/io.hpp"
#include "nslab/random.hpp"

using namespace nslab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "nslab_test_io";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& data) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << data;
}

Error error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e;
  }
  return Error(ErrorKind::InvalidArgument, "no error");
}

const char* kMinimal = R"(# minimal theorem13 config
N = 16
lambda_sq = 1   # unit shell
M0 = 1
epsilon = 0.01
b = 0.5
)";

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("minimal theorem13 config") {
    const io::Config c = io::parse_config_text(kMinimal, "min.cfg");
    CHECK(c.entries.size() == 5);
    CHECK(c.entries.at("lambda_sq").value == "1");
    CHECK(c.entries.at("lambda_sq").line == 3);
    const ExperimentConfig e = io::experiment_config(c, Scenario::Theorem13);
    CHECK(e.N == 16);
    CHECK(e.lambda_sq == 1);
    CHECK(e.epsilon == 0.01);
    CHECK(e.b == 0.5);
    CHECK(e.C == 0.1);
  }
  SUBCASE("b outside (0, 1) is a schema error") {
    const io::Config c = io::parse_config_text(std::string(kMinimal) + "", "b.cfg");
    io::Config bad = c;
    bad.entries["b"].value = "1.5";
    const Error e = error_of([&] { io::experiment_config(bad, Scenario::Theorem13); });
    CHECK(e.kind() == ErrorKind::Schema);
    CHECK(std::string(e.what()).find("0 < b < 1") != std::string::npos);
  }
  SUBCASE("duplicate key is a syntax error with position") {
    const Error e = error_of([] { io::parse_config_text("N = 16\n  seed = 2\nN = 32\n", "dup.cfg"); });
    CHECK(e.kind() == ErrorKind::Syntax);
    CHECK(std::string(e.what()).find("dup.cfg:3:1") != std::string::npos);
    CHECK(std::string(e.what()).find("line 1") != std::string::npos);
  }
  SUBCASE("malformed lines") {
    CHECK(error_of([] { io::parse_config_text("N 16\n"); }).kind() == ErrorKind::Syntax);
    const Error e = error_of([] { io::parse_config_text("\nN = 16\nfoo bar = 1\n", "s.cfg"); });
    CHECK(std::string(e.what()).find("s.cfg:3:5") != std::string::npos);
    CHECK(error_of([] { io::parse_config_text("= 3\n"); }).kind() == ErrorKind::Syntax);
    CHECK(error_of([] { io::parse_config_text("N =\n"); }).kind() == ErrorKind::Syntax);
  }
  SUBCASE("every violation is named") {
    const io::Config c = io::parse_config_text("N = 16\nfoo = 1\nb = 0\nepsilon = x\n", "v.cfg");
    const Error e = error_of([&] { io::validate(c, io::schema_for("experiment:theorem13")); });
    const std::string msg = e.what();
    CHECK(e.kind() == ErrorKind::Schema);
    CHECK(msg.find("unknown key 'foo'") != std::string::npos);
    CHECK(msg.find("b = 0") != std::string::npos);
    CHECK(msg.find("epsilon: cannot parse") != std::string::npos);
    CHECK(msg.find("missing required key 'lambda_sq'") != std::string::npos);
    CHECK(msg.find("missing required key 'M0'") != std::string::npos);
  }
  SUBCASE("scenario key must agree") {
    io::Config c = io::parse_config_text(kMinimal);
    c.entries["scenario"] = {"corollary18", 9, 1};
    CHECK(error_of([&] { io::experiment_config(c, Scenario::Theorem13); }).kind() == ErrorKind::Schema);
  }
  SUBCASE("lists") {
    const io::Config c = io::parse_config_text("shells = 1:1.0, 2 : 0.5,3\ngrids = 16,32\n");
    const auto shells = c.get_shells("shells");
    REQUIRE(shells.size() == 3);
    CHECK(shells[1].lambda_sq == 2);
    CHECK(shells[1].amplitude == 0.5);
    CHECK(shells[2].amplitude == 1.0);
    CHECK(c.get_int_list("grids", {}) == std::vector<int>{16, 32});
  }
  SUBCASE("hash ignores comments and layout") {
    const io::Config a = io::parse_config_text("N=16\nb = 0.5\n");
    const io::Config b = io::parse_config_text("# header\nb   =   0.5   # note\n\nN = 16\n");
    const io::Config c = io::parse_config_text("N=16\nb = 0.25\n");
    CHECK(a.hash() == b.hash());
    CHECK(a.hash() != c.hash());
  }
  SUBCASE("unreadable file") {
    CHECK(error_of([] { io::parse_config("/nonexistent/dir/x.cfg"); }).kind() == ErrorKind::Io);
  }
  SUBCASE("solve schema requires dt and T") {
    const io::Config c = io::parse_config_text("N = 16\n");
    const Error e = error_of([&] { io::validate(c, io::schema_for("solve")); });
    CHECK(std::string(e.what()).find("'dt'") != std::string::npos);
    CHECK(std::string(e.what()).find("'T'") != std::string::npos);
  }
}

TEST_CASE("fnv1a") {
  CHECK(io::fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(io::fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(io::fnv1a("foobar") == 0x85944171f73967e8ULL);
  CHECK(io::hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("snapshots") {
  SUBCASE("round trip is bit exact") {
    Rng rng(3);
    SpectralField f(8, 9, false, "tensor field");
    for (auto& v : f.coeffs()) v = rng.complex_normal();
    f(0, 5) = Complex{-0.0, 1e-310};
    const fs::path p = scratch("rt.nslb");
    io::write_snapshot(f, p);
    const SpectralField g = io::read_snapshot(p);
    CHECK(g.grid_size() == 8);
    CHECK(g.components() == 9);
    CHECK_FALSE(g.is_real());
    CHECK(g.label() == "tensor field");
    CHECK(std::memcmp(f.coeffs().data(), g.coeffs().data(), f.coeffs().size() * sizeof(Complex)) == 0);

    const SpectralField r = random_solenoidal(16, 4, RandomBand{3});
    io::write_snapshot(r, p);
    const SpectralField s = io::read_snapshot(p);
    CHECK(s.is_real());
    CHECK(std::memcmp(r.coeffs().data(), s.coeffs().data(), r.coeffs().size() * sizeof(Complex)) == 0);
  }
  SUBCASE("documented byte layout") {
    const int N = 4;
    SpectralField f(N, 1, false, "ab");
    f.at(0, {-1, -1, -1}) = Complex{1.5, -2.0};  // first entry in n order
    f.at(0, {2, 2, 2}) = Complex{0.25, 0.0};      // last entry
    const fs::path p = scratch("layout.nslb");
    io::write_snapshot(f, p);
    const std::string bytes = slurp(p);
    const std::size_t header = 5 + 4 + 4 + 1 + 4 + 2;
    REQUIRE(bytes.size() == header + 64 * 16);
    CHECK(bytes.substr(0, 5) == "NSLB1");
    CHECK(static_cast<unsigned char>(bytes[5]) == 4);
    CHECK(static_cast<unsigned char>(bytes[9]) == 1);
    CHECK(bytes[13] == 0);
    CHECK(static_cast<unsigned char>(bytes[14]) == 2);
    CHECK(bytes.substr(18, 2) == "ab");
    double re = 0, im = 0, last = 0;
    std::memcpy(&re, bytes.data() + header, 8);
    std::memcpy(&im, bytes.data() + header + 8, 8);
    std::memcpy(&last, bytes.data() + bytes.size() - 16, 8);
    CHECK(re == 1.5);
    CHECK(im == -2.0);
    CHECK(last == 0.25);
    // second entry is n = (-1, -1, 0): n3 varies fastest
    SpectralField g(N, 1, false);
    g.at(0, {-1, -1, 0}) = 7.0;
    io::write_snapshot(g, p);
    const std::string b2 = slurp(p);
    double second = 0;
    std::memcpy(&second, b2.data() + header - 2 + 16, 8);
    CHECK(second == 7.0);
  }
  SUBCASE("truncated and corrupt files") {
    const fs::path p = scratch("t.nslb");
    io::write_snapshot(random_solenoidal(8, 5, RandomBand{2}), p);
    const std::string bytes = slurp(p);
    spit(p, bytes.substr(0, bytes.size() - 3));
    CHECK(error_of([&] { io::read_snapshot(p); }).kind() == ErrorKind::TruncatedPayload);
    spit(p, bytes.substr(0, 10));
    CHECK(error_of([&] { io::read_snapshot(p); }).kind() == ErrorKind::TruncatedPayload);
    std::string wrong = bytes;
    wrong[0] = 'X';
    spit(p, wrong);
    CHECK(error_of([&] { io::read_snapshot(p); }).kind() == ErrorKind::BadMagic);
    spit(p, "");
    CHECK(error_of([&] { io::read_snapshot(p); }).kind() == ErrorKind::TruncatedPayload);
    CHECK(error_of([&] { io::read_snapshot(scratch("missing.nslb")); }).kind() == ErrorKind::Io);
  }
}

TEST_CASE("csv output") {
  CHECK(io::csv_comment(0x1234) == "# nslab " + std::string(io::kVersion) + " config_hash=0000000000001234");
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17}) CHECK(std::stod(io::format_double(v)) == v);
  CHECK(io::format_double(std::nan("")) == "nan");

  ExperimentReport rep;
  rep.scenario = Scenario::BeltramiExactness;
  rep.check("a", 1.0, 2.0);
  rep.check("b", 3.0, 2.0);
  rep.note("k", 0.5);
  rep.snapshots.emplace_back("u0", random_solenoidal(8, 1, RandomBand{2}));
  const fs::path dir = scratch("report");
  fs::remove_all(dir);
  io::write_report(rep, dir, 42);
  const std::string csv = slurp(dir / "report.csv");
  CHECK(csv == io::csv_comment(42) + "\ncheck,measured,bound,pass\na,1,2,1\nb,3,2,0\n");
  const std::string manifest = slurp(dir / "manifest.txt");
  CHECK(manifest.find("verdict fail") != std::string::npos);
  CHECK(manifest.find("u0.nslb") != std::string::npos);
  CHECK(rep.manifest.back() == "manifest.txt");
  for (const auto& f : rep.manifest) CHECK(fs::exists(dir / f));
}
