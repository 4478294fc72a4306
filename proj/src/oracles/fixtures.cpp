#include "patternboost/oracles/fixtures.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "patternboost/oracles/counts.hpp"
#include "patternboost/problems/box_cover.hpp"
#include "patternboost/problems/cross_sperner.hpp"
#include "patternboost/problems/hypercube.hpp"
#include "patternboost/problems/pattern312.hpp"
#include "patternboost/problems/permanent.hpp"
#include "patternboost/problems/sphere.hpp"
#include "patternboost/problems/sperner.hpp"

namespace pb::oracles {

namespace fs = std::filesystem;
using namespace problems;

bool FixtureReport::ok() const {
  return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.pass; });
}

const std::vector<std::string>& fixture_files() {
  static const std::vector<std::string> files = {
      "cube6_diameter6_81.txt",     "sperner_saturated_108.txt", "sperner_saturated_8.txt",
      "cross_sperner_tuples.txt",   "cross_sperner_pair_4_2.txt", "box_double_cover_41.txt",
      "sphere_no5_sets.txt",        "permanent312_a25.txt",      "permanent312_a25_prime.txt",
  };
  return files;
}

namespace {

// Line reader that skips blank lines and '#' comments and remembers line numbers.
class Reader {
 public:
  explicit Reader(const fs::path& path) : path_(path), in_(path) {
    if (!in_) throw std::runtime_error("cannot read fixture " + path.string());
  }
  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++line_no_;
      if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  }
  std::string require() {
    std::string line;
    if (!next(line)) fail("unexpected end of file");
    return line;
  }
  /// `key value` header line.
  long long keyed(const std::string& key) {
    std::istringstream ss(require());
    std::string k;
    long long v = 0;
    if (!(ss >> k >> v) || k != key) fail("expected '" + key + " <value>'");
    return v;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw std::runtime_error(path_.string() + ":" + std::to_string(line_no_) + ": " + what);
  }

 private:
  fs::path path_;
  std::ifstream in_;
  int line_no_ = 0;
};

std::vector<Fixture> load_cube(const fs::path& path) {
  Reader r(path);
  Fixture f;
  f.name = path.stem().string();
  f.problem = ProblemId::cube;
  const int d = static_cast<int>(r.keyed("d"));
  if (d < 1 || d > kMaxCubeDimension) r.fail("cube dimension out of range");
  f.claims["edges"] = r.keyed("edges");
  f.claims["diameter"] = r.keyed("diameter");
  f.params.n = d;
  CubeSubgraph s = CubeSubgraph::empty(d);
  std::string line;
  while (r.next(line)) {
    std::istringstream ss(line);
    std::string a, b;
    if (!(ss >> a >> b) || a.size() != static_cast<std::size_t>(d) || b.size() != a.size())
      r.fail("expected two " + std::to_string(d) + "-bit vertices");
    std::uint32_t u = 0, v = 0;
    for (int i = 0; i < d; ++i) {
      if ((a[i] != '0' && a[i] != '1') || (b[i] != '0' && b[i] != '1')) r.fail("vertex is not a bit string");
      u = u << 1 | static_cast<std::uint32_t>(a[i] - '0');
      v = v << 1 | static_cast<std::uint32_t>(b[i] - '0');
    }
    if (std::popcount(u ^ v) != 1) r.fail("vertices " + a + " and " + b + " are not adjacent in the cube");
    if (s.has_edge(u, v)) r.fail("edge " + a + " " + b + " listed twice");
    s.set_edge(u, v, true);
  }
  f.payload = s.edge_bits;
  return {f};
}

std::vector<Fixture> load_sperner(const fs::path& path) {
  Reader r(path);
  Fixture f;
  f.name = path.stem().string();
  f.problem = ProblemId::sperner;
  const int n = static_cast<int>(r.keyed("n"));
  if (n < 1 || n > kMaxGroundSet) r.fail("ground set size out of range");
  f.params.n = n;
  f.params.k = static_cast<int>(r.keyed("k"));
  f.claims["size"] = r.keyed("size");
  std::vector<SetMask> sets;
  std::string line;
  while (r.next(line)) {
    std::istringstream ss(line);
    std::string tok;
    SetMask m = 0;
    bool empty_marker = false;
    while (ss >> tok) {
      if (tok == "-") {
        empty_marker = true;
        continue;
      }
      int e = 0;
      try {
        e = std::stoi(tok);
      } catch (const std::exception&) {
        r.fail("bad element '" + tok + "'");
      }
      if (e < 1 || e > n) r.fail("element " + tok + " outside 1.." + std::to_string(n));
      m |= SetMask{1} << (e - 1);
    }
    if (empty_marker && m != 0) r.fail("'-' marks the empty set and takes no elements");
    sets.push_back(m);
  }
  SetFamily fam = SetFamily::empty(n);
  f.claims["listed"] = static_cast<std::int64_t>(sets.size());
  for (SetMask s : sets) fam.member[s] = 1;
  f.payload = fam.member;
  return {f};
}

std::vector<Fixture> load_cross_sperner(const fs::path& path) {
  Reader r(path);
  std::vector<Fixture> out;
  std::string line;
  std::vector<std::vector<SetMask>> fams;
  auto finish = [&] {
    if (out.empty()) return;
    Fixture& f = out.back();
    if (fams.size() != static_cast<std::size_t>(f.params.k)) r.fail(f.name + ": wrong number of families");
    Payload owner(std::size_t{1} << f.params.n, 0);
    for (std::size_t i = 0; i < fams.size(); ++i)
      for (SetMask s : fams[i]) {
        if (s >> f.params.n) r.fail(f.name + ": set mask outside the ground set");
        if (owner[s] != 0) r.fail(f.name + ": set " + std::to_string(s) + " appears in two families");
        owner[s] = static_cast<std::uint8_t>(i + 1);
      }
    f.payload = std::move(owner);
    fams.clear();
  };
  while (r.next(line)) {
    std::istringstream ss(line);
    std::string key;
    ss >> key;
    if (key == "tuple") {
      finish();
      int n = 0, k = 0;
      long long product = 0;
      if (!(ss >> n >> k >> product)) r.fail("expected 'tuple <n> <k> <product>'");
      if (n < 1 || n > kMaxGroundSet || k < 2 || k > kMaxCrossFamilies) r.fail("tuple size out of range");
      Fixture f;
      f.name = path.stem().string() + "_" + std::to_string(n) + "_" + std::to_string(k);
      f.problem = ProblemId::cross_sperner;
      f.params.n = n;
      f.params.k = k;
      f.claims["product"] = product;
      out.push_back(std::move(f));
    } else if (key == "family") {
      if (out.empty()) r.fail("family before any tuple");
      std::vector<SetMask> fam;
      long long m = 0;
      while (ss >> m) {
        if (m < 0) r.fail("negative set mask");
        fam.push_back(static_cast<SetMask>(m));
      }
      if (!ss.eof()) r.fail("bad set mask");
      fams.push_back(std::move(fam));
    } else {
      r.fail("expected 'tuple' or 'family'");
    }
  }
  finish();
  if (out.empty()) r.fail("no tuples");
  return out;
}

std::vector<Fixture> load_box(const fs::path& path) {
  Reader r(path);
  Fixture f;
  f.name = path.stem().string();
  f.problem = ProblemId::box_cover;
  const int d = static_cast<int>(r.keyed("d"));
  if (d < 1 || d > kMaxBoxDimension) r.fail("box dimension out of range");
  f.params.n = d;
  f.claims["count"] = r.keyed("count");
  BoxCover c;
  c.d = d;
  std::string line;
  while (r.next(line)) {
    std::istringstream ss(line);
    std::string tok;
    Box b;
    while (ss >> tok) {
      std::uint8_t mask = 0;
      for (char ch : tok) {
        if (ch < '0' || ch > '2') r.fail("factor '" + tok + "' is not a subset of {0,1,2}");
        mask |= static_cast<std::uint8_t>(1U << (ch - '0'));
      }
      b.push_back(mask);
    }
    if (b.size() != static_cast<std::size_t>(d)) r.fail("expected " + std::to_string(d) + " factors");
    c.boxes.push_back(std::move(b));
  }
  f.claims["listed"] = static_cast<std::int64_t>(c.boxes.size());
  f.params.max_boxes = static_cast<int>(c.boxes.size());
  f.payload = c.to_payload(c.boxes.size());
  return {f};
}

std::vector<Fixture> load_sphere(const fs::path& path) {
  Reader r(path);
  std::vector<Fixture> out;
  std::string line;
  while (r.next(line)) {
    std::istringstream hs(line);
    std::string key;
    int n = 0, count = 0;
    if (!(hs >> key >> n >> count) || key != "grid") r.fail("expected 'grid <n> <count>'");
    std::vector<Point3> pts;
    int top = 0;
    for (int i = 0; i < count; ++i) {
      std::istringstream ps(r.require());
      Point3 p;
      if (!(ps >> p.x >> p.y >> p.z)) r.fail("expected three coordinates");
      if (p.x < 1 || p.y < 1 || p.z < 1) r.fail("coordinates are 1-based");
      top = std::max({top, p.x, p.y, p.z});
      pts.push_back({p.x - 1, p.y - 1, p.z - 1});
    }
    if (top > kMaxSphereGrid) r.fail("coordinate exceeds the largest supported grid");
    Fixture f;
    f.name = path.stem().string() + "_n" + std::to_string(n);
    f.problem = ProblemId::sphere;
    // A list whose coordinates leave [n]^3 is stored on the grid it actually spans.
    f.params.n = std::max(n, top);
    f.claims["size"] = count;
    f.claims["grid"] = n;
    f.claims["span"] = top;
    std::sort(pts.begin(), pts.end());
    if (std::adjacent_find(pts.begin(), pts.end()) != pts.end()) r.fail(f.name + ": repeated point");
    f.payload = PointSet3D::from_points(f.params.n, pts).occupied;
    out.push_back(std::move(f));
  }
  if (out.empty()) r.fail("no point sets");
  return out;
}

std::vector<Fixture> load_permanent(const fs::path& path) {
  Reader r(path);
  Fixture f;
  f.name = path.stem().string();
  f.problem = ProblemId::permanent312;
  const int n = static_cast<int>(r.keyed("n"));
  if (n < 1 || n > kMaxPermanentSide) r.fail("matrix side out of range");
  f.params.n = n;
  f.claims["permanent"] = r.keyed("permanent");
  std::vector<std::string> rows;
  for (int i = 0; i < n; ++i) {
    std::istringstream ss(r.require());
    std::string row;
    ss >> row;
    if (row.size() != static_cast<std::size_t>(n) || row.find_first_not_of("01") != std::string::npos)
      r.fail("expected a row of " + std::to_string(n) + " binary digits");
    rows.push_back(row);
  }
  std::string extra;
  if (r.next(extra)) r.fail("trailing data after the matrix");
  f.payload = BinaryMatrix::from_rows(rows).a;
  return {f};
}

void check(FixtureReport& rep, const std::string& name, bool pass, const std::string& detail = {}) {
  rep.assertions.push_back({name, pass, pass ? std::string() : detail});
}

std::string eq_detail(std::int64_t got, std::int64_t want) {
  return "got " + std::to_string(got) + ", claimed " + std::to_string(want);
}

void verify_cube(const Fixture& f, FixtureReport& rep) {
  const auto s = CubeSubgraph::from_payload(f.params.n, f.payload);
  const auto edges = static_cast<std::int64_t>(s.edge_count());
  const int diam = cube_subgraph_diameter(s);
  const int naive = cube_diameter_naive(s);
  check(rep, "spanning", diam >= 0, "subgraph is disconnected");
  check(rep, "diameter=" + std::to_string(f.claims.at("diameter")), diam == f.claims.at("diameter"),
        eq_detail(diam, f.claims.at("diameter")));
  check(rep, "diameter agrees with all-pairs search", naive == diam, eq_detail(naive, diam));
  check(rep, "edges=" + std::to_string(f.claims.at("edges")), edges == f.claims.at("edges"),
        eq_detail(edges, f.claims.at("edges")));
  check(rep, "score=-edges", score_cube(s) == -edges, "score " + std::to_string(score_cube(s)));
}

void verify_sperner(const Fixture& f, FixtureReport& rep) {
  const auto fam = SetFamily::from_payload(f.params.n, f.payload);
  const int k = f.params.k;
  const auto size = static_cast<std::int64_t>(fam.size());
  check(rep, "sets distinct", size == f.claims.at("listed"),
        std::to_string(f.claims.at("listed") - size) + " repeated sets");
  check(rep, "size=" + std::to_string(f.claims.at("size")), size == f.claims.at("size"),
        eq_detail(size, f.claims.at("size")));
  const int chain = longest_chain(fam);
  const auto sets = fam.sets();
  check(rep, std::to_string(k) + "-Sperner", is_k_sperner(fam, k), "longest chain " + std::to_string(chain));
  check(rep, "longest chain agrees with pairwise search", longest_chain_naive(sets) == chain,
        eq_detail(longest_chain_naive(sets), chain));
  check(rep, "saturated", is_saturated_k_sperner(fam, k),
        std::to_string(count_addable(fam, k)) + " sets can be added");
  bool naive_saturated = true;
  std::string witness;
  auto extended = sets;
  for (SetMask s = 0; s < fam.member.size() && naive_saturated; ++s) {
    if (fam.member[s]) continue;
    extended.push_back(s);
    if (longest_chain_naive(extended) <= k) {
      naive_saturated = false;
      witness = "set mask " + std::to_string(s) + " can be added";
    }
    extended.pop_back();
  }
  check(rep, "saturation agrees with pairwise search", naive_saturated, witness);
  check(rep, "score=-size", score_sperner(fam, k) == -size, "score " + std::to_string(score_sperner(fam, k)));
}

void verify_cross_sperner(const Fixture& f, FixtureReport& rep) {
  const auto t = SetFamilyTuple::from_payload(f.params.n, f.params.k, f.payload);
  const auto fams = t.families();
  check(rep, "cross-Sperner", is_cross_sperner(t), "a member of one family lies inside a member of another");
  check(rep, "cross-Sperner by pairwise search", is_cross_sperner_naive(fams),
        "a member of one family lies inside a member of another");
  std::int64_t product = 1;
  for (const auto& fam : fams) product *= static_cast<std::int64_t>(fam.size());
  check(rep, "product=" + std::to_string(f.claims.at("product")), product == f.claims.at("product"),
        eq_detail(product, f.claims.at("product")));
  check(rep, "score=product", score_cross_sperner(t) == product, "score " + std::to_string(score_cross_sperner(t)));
}

void verify_box(const Fixture& f, FixtureReport& rep) {
  const auto c = BoxCover::from_payload(f.params.n, static_cast<std::size_t>(f.params.max_boxes), f.payload);
  const auto count = static_cast<std::int64_t>(c.boxes.size());
  check(rep, "count=" + std::to_string(f.claims.at("count")), count == f.claims.at("count"),
        eq_detail(count, f.claims.at("count")));
  std::size_t improper = 0;
  for (const auto& b : c.boxes) improper += !is_proper(b);
  check(rep, "all boxes proper", improper == 0, std::to_string(improper) + " improper boxes");
  check(rep, "exact double cover", verify_double_cover(c), "some point is not covered exactly twice");
  const auto cov = coverage_naive(c);
  auto bad = std::find_if(cov.begin(), cov.end(), [](int v) { return v != 2; });
  check(rep, "double cover by direct membership", bad == cov.end(),
        bad == cov.end() ? "" : "point " + std::to_string(bad - cov.begin()) + " covered " + std::to_string(*bad) + " times");
  check(rep, "score=-count", score_box_cover(c) == -count, "score " + std::to_string(score_box_cover(c)));
}

void verify_sphere(const Fixture& f, FixtureReport& rep) {
  const auto set = PointSet3D::from_payload(f.params.n, f.payload);
  const auto pts = set.points();
  const auto size = static_cast<std::int64_t>(pts.size());
  check(rep, "size=" + std::to_string(f.claims.at("size")), size == f.claims.at("size"),
        eq_detail(size, f.claims.at("size")));
  // Witness: the number of degenerate 5-subsets and the first one, 1-based like the file.
  std::string witness;
  if (!is_no5_sphere_naive(pts)) {
    std::size_t bad = 0;
    std::string first;
    const std::size_t m = pts.size();
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a + 1; b < m; ++b)
        for (std::size_t c = b + 1; c < m; ++c)
          for (std::size_t d = c + 1; d < m; ++d)
            for (std::size_t e = d + 1; e < m; ++e) {
              if (cosphere_det_naive({pts[a], pts[b], pts[c], pts[d], pts[e]}) != 0) continue;
              if (bad++ == 0)
                for (auto i : {a, b, c, d, e})
                  first += "(" + std::to_string(pts[i].x + 1) + "," + std::to_string(pts[i].y + 1) + "," +
                           std::to_string(pts[i].z + 1) + ")";
            }
    witness = std::to_string(bad) + " degenerate 5-subsets, e.g. " + first;
  }
  check(rep, "no 5 on a sphere or plane", is_no5_sphere(pts), witness);
  check(rep, "no 5 on a sphere or plane by determinants", is_no5_sphere_naive(pts), witness);
  // Lists whose coordinates leave [n]^3 are checked for the sphere property only.
  if (f.claims.at("span") <= f.claims.at("grid"))
    check(rep, "inside [" + std::to_string(f.claims.at("grid")) + "]^3", true);
}

void verify_permanent(const Fixture& f, FixtureReport& rep) {
  const auto m = BinaryMatrix::from_payload(f.params.n, f.payload);
  check(rep, "312-avoiding", !contains_312(m), std::to_string(count_312(m)) + " occurrences");
  check(rep, "312-avoiding by exhaustive search", !contains_312_naive(m), "pattern found");
  const BigInt per = permanent(m);
  const BigInt want = f.claims.at("permanent");
  check(rep, "permanent=" + std::to_string(f.claims.at("permanent")), per == want,
        "got " + per.str() + ", claimed " + want.str());
}

}  // namespace

std::vector<Fixture> load_fixture_file(const fs::path& path) {
  const std::string name = path.filename().string();
  auto starts = [&](const char* p) { return name.rfind(p, 0) == 0; };
  if (starts("cube")) return load_cube(path);
  if (starts("cross_sperner")) return load_cross_sperner(path);
  if (starts("sperner")) return load_sperner(path);
  if (starts("box")) return load_box(path);
  if (starts("sphere")) return load_sphere(path);
  if (starts("permanent312")) return load_permanent(path);
  throw std::runtime_error(path.string() + ": unknown fixture kind");
}

std::vector<Fixture> load_fixture_dir(const fs::path& dir) {
  std::string missing;
  for (const auto& f : fixture_files())
    if (!fs::exists(dir / f)) missing += (missing.empty() ? "" : ", ") + f;
  if (!missing.empty()) throw std::runtime_error("fixture directory " + dir.string() + " is missing " + missing);
  std::vector<Fixture> all;
  for (const auto& f : fixture_files()) {
    auto part = load_fixture_file(dir / f);
    all.insert(all.end(), part.begin(), part.end());
  }
  return all;
}

FixtureReport verify_fixture(const Fixture& f) {
  FixtureReport rep;
  rep.fixture = f.name;
  try {
    auto problem = make_problem(f.problem, f.params);
    problem->check_shape(f.payload);
    switch (f.problem) {
      case ProblemId::cube: verify_cube(f, rep); break;
      case ProblemId::sperner: verify_sperner(f, rep); break;
      case ProblemId::cross_sperner: verify_cross_sperner(f, rep); break;
      case ProblemId::box_cover: verify_box(f, rep); break;
      case ProblemId::sphere: verify_sphere(f, rep); break;
      case ProblemId::permanent312: verify_permanent(f, rep); break;
      default: check(rep, "supported", false, "no verifier for this problem"); break;
    }
    const bool valid = problem->is_valid(f.payload);
    check(rep, "valid", valid, "the problem's validity predicate rejects it");
  } catch (const std::exception& e) {
    check(rep, "parses", false, e.what());
  }
  return rep;
}

std::string format_report(const FixtureReport& r) {
  std::string out;
  for (const auto& a : r.assertions) {
    out += a.pass ? "PASS " : "FAIL ";
    out += r.fixture + " " + a.name;
    if (!a.pass && !a.detail.empty()) out += ": " + a.detail;
    out += '\n';
  }
  return out;
}

}  // namespace pb::oracles
