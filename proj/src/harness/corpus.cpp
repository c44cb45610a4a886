#include "saturn/harness/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "saturn/fol/tptp.hpp"
#include "saturn/harness/oracle.hpp"
#include "saturn/util/random.hpp"

namespace saturn::harness {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view family_name(Family f) {
  switch (f) {
    case Family::ChainResolution: return "chain-resolution";
    case Family::MarkerPredicate: return "marker-predicate";
    case Family::PigeonholeSmall: return "pigeonhole-small";
    case Family::RandomCnf: return "random-cnf";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  for (auto f : {Family::ChainResolution, Family::MarkerPredicate, Family::PigeonholeSmall, Family::RandomCnf})
    if (family_name(f) == name) return f;
  throw std::invalid_argument("unknown corpus family '" + std::string(name) + "'");
}

namespace {

struct Line {
  bool conjecture = false;
  std::string formula;
  bool relevant = false;
};

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_index(rng, i)]);
}

GeneratedProblem render(const std::string& name, const std::string& header, const std::vector<Line>& lines) {
  GeneratedProblem g;
  g.name = name;
  std::ostringstream out;
  out << "% " << header << '\n';
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string cname = "c" + std::to_string(i);
    out << "cnf(" << cname << ", " << (lines[i].conjecture ? "negated_conjecture" : "axiom") << ", "
        << lines[i].formula << ").\n";
    if (lines[i].relevant) g.proof_clauses.push_back(cname);
  }
  g.tptp = out.str();
  return g;
}

std::string padded(std::size_t i) {
  std::string s = std::to_string(i);
  return std::string(s.size() < 3 ? 3 - s.size() : 0, '0') + s;
}

std::vector<Line> chain_lines(std::size_t n, bool unary) {
  auto atom = [&](std::size_t k, const char* arg) {
    return "p" + std::to_string(k) + (unary ? "(" + std::string(arg) + ")" : "");
  };
  std::vector<Line> lines;
  lines.push_back({false, atom(1, "a")});
  for (std::size_t k = 1; k < n; ++k) lines.push_back({false, "~" + atom(k, "X") + " | " + atom(k + 1, "X")});
  lines.push_back({true, "~" + atom(n, "a")});
  return lines;
}

constexpr std::size_t kFanFacts = 6;
constexpr std::size_t kFanRules = 4;

std::vector<Line> marker_lines(Rng& rng) {
  std::vector<Line> lines;
  const std::size_t len = 2 + uniform_index(rng, 4);
  auto k = [](std::size_t i) { return "k" + std::to_string(i); };
  lines.push_back({false, "m(" + k(0) + ")", true});
  for (std::size_t i = 1; i <= len; ++i) lines.push_back({false, "~m(" + k(i - 1) + ") | m(" + k(i) + ")", true});
  lines.push_back({true, "~m(" + k(len) + ")", true});

  // Decoys have finite closures, so saturation without the marker chain
  // terminates, but they keep breadth-first search busy.
  const std::size_t dead_ends = 1 + uniform_index(rng, 2);
  for (std::size_t j = 0; j < dead_ends; ++j) {
    const std::string n = "n" + std::to_string(j);
    auto e = [&](std::size_t t) { return "e" + std::to_string(j) + "_" + std::to_string(t); };
    const std::size_t dlen = 2 + uniform_index(rng, 3);
    lines.push_back({false, n + "(" + e(0) + ")"});
    for (std::size_t t = 1; t <= dlen; ++t) lines.push_back({false, "~" + n + "(" + e(t - 1) + ") | " + n + "(" + e(t) + ")"});
  }
  const std::size_t fans = 1 + uniform_index(rng, 3);
  for (std::size_t j = 0; j < fans; ++j) {
    const std::string s = "s" + std::to_string(j);
    auto t = [&](std::size_t i) { return "t" + std::to_string(j) + "_" + std::to_string(i); };
    const std::size_t facts = 2 + uniform_index(rng, kFanFacts);
    const std::size_t rules = 2 + uniform_index(rng, kFanRules);
    for (std::size_t i = 0; i < facts; ++i) lines.push_back({false, s + "(o" + std::to_string(i) + ")"});
    for (std::size_t i = 0; i < rules; ++i) lines.push_back({false, "~" + s + "(X) | " + t(i) + "(X)"});
    lines.push_back({false, "~" + t(0) + "(X) | ~" + t(1) + "(X) | u" + std::to_string(j) + "(X)"});
  }
  shuffle(lines, rng);
  return lines;
}

std::vector<Line> pigeon_lines(std::size_t holes, Rng& rng) {
  std::vector<Line> lines;
  auto in = [](std::size_t p, std::size_t h) {
    return "in(p" + std::to_string(p) + ",h" + std::to_string(h) + ")";
  };
  for (std::size_t p = 0; p <= holes; ++p) {
    std::string f;
    for (std::size_t h = 0; h < holes; ++h) f += (h ? " | " : "") + in(p, h);
    lines.push_back({true, f});
  }
  for (std::size_t h = 0; h < holes; ++h)
    for (std::size_t p = 0; p <= holes; ++p)
      for (std::size_t q = p + 1; q <= holes; ++q) lines.push_back({false, "~" + in(p, h) + " | ~" + in(q, h)});
  shuffle(lines, rng);
  return lines;
}

std::vector<Line> random_cnf_lines(Rng& rng) {
  const std::size_t vars = 3 + uniform_index(rng, 4);
  const std::size_t clauses = (43 * vars + 5) / 10;
  std::vector<Line> lines;
  for (std::size_t c = 0; c < clauses; ++c) {
    std::vector<std::size_t> pick(vars);
    for (std::size_t i = 0; i < vars; ++i) pick[i] = i;
    shuffle(pick, rng);
    std::string f;
    for (std::size_t i = 0; i < 3; ++i) {
      if (i) f += " | ";
      if (uniform_index(rng, 2) == 1) f += "~";
      f += "q" + std::to_string(pick[i]);
    }
    lines.push_back({c + 1 == clauses, f});
  }
  return lines;
}

}  // namespace

std::string chain_problem_text(std::size_t n) {
  if (n == 0) throw std::invalid_argument("chain length must be positive");
  return render("chain", "chain-resolution n=" + std::to_string(n), chain_lines(n, false)).tptp;
}

std::vector<GeneratedProblem> generate_family(Family f, std::size_t size, std::uint64_t seed) {
  if (size == 0) throw std::invalid_argument("corpus size must be at least 1");
  std::vector<GeneratedProblem> out;
  const std::string fam(family_name(f));
  for (std::size_t i = 0; i < size; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(f), i));
    const std::string name = fam.substr(0, fam.find('-')) + "_" + padded(i);
    const std::string header = fam + " problem " + std::to_string(i) + ", seed " + std::to_string(seed);
    switch (f) {
      case Family::ChainResolution: {
        const std::size_t n = 2 + uniform_index(rng, 6);
        out.push_back(render(name, header, chain_lines(n, uniform_index(rng, 2) == 1)));
        break;
      }
      case Family::MarkerPredicate: {
        auto g = render(name, header, marker_lines(rng));
        const fol::Problem p = fol::parse_tptp(g.tptp, name);
        auto core = minimal_refutable_core(p, 6);
        std::sort(core.begin(), core.end());
        auto planted = g.proof_clauses;
        std::sort(planted.begin(), planted.end());
        if (core != planted) throw std::logic_error("marker problem " + name + " has an unexpected minimal proof");
        out.push_back(std::move(g));
        break;
      }
      case Family::PigeonholeSmall:
        out.push_back(render(name, header, pigeon_lines(1 + i % 3, rng)));
        break;
      case Family::RandomCnf:
        out.push_back(render(name, header, random_cnf_lines(rng)));
        break;
    }
  }
  return out;
}

Corpus write_corpus(const fs::path& dir, const std::string& name, Family f,
                    const std::vector<GeneratedProblem>& problems, std::uint64_t seed) {
  fs::create_directories(dir);
  Corpus c;
  c.name = name;
  json files = json::array();
  json markers = json::object();
  for (const auto& g : problems) {
    const std::string file = g.name + ".p";
    std::ofstream out(dir / file, std::ios::binary);
    out << g.tptp;
    if (!out) throw std::runtime_error("cannot write " + (dir / file).string());
    files.push_back(file);
    c.files.push_back(dir / file);
    if (f == Family::MarkerPredicate) {
      markers[g.name] = g.proof_clauses;
      c.proof_clauses[g.name] = g.proof_clauses;
    }
  }
  json manifest = {{"name", name}, {"family", family_name(f)}, {"seed", seed}, {"split", ""}, {"files", files}};
  if (f == Family::MarkerPredicate) manifest["markers"] = markers;
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  out << manifest.dump(2) << '\n';
  if (!out) throw std::runtime_error("cannot write manifest in " + dir.string());
  return c;
}

namespace {

Corpus from_manifest(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw std::runtime_error("bad manifest " + file.string() + ": " + e.what());
  }
  Corpus c;
  c.name = j.value("name", file.parent_path().filename().string());
  c.split = j.value("split", "");
  for (const auto& f : j.at("files")) c.files.push_back(file.parent_path() / f.get<std::string>());
  if (j.contains("markers"))
    for (const auto& [k, v] : j["markers"].items()) c.proof_clauses[k] = v.get<std::vector<std::string>>();
  return c;
}

}  // namespace

Corpus load_corpus(const fs::path& path) {
  Corpus c;
  if (fs::is_directory(path)) {
    if (fs::exists(path / "manifest.json")) {
      c = from_manifest(path / "manifest.json");
    } else {
      c.name = path.filename().string();
      for (const auto& e : fs::directory_iterator(path))
        if (e.is_regular_file() && e.path().extension() == ".p") c.files.push_back(e.path());
      std::sort(c.files.begin(), c.files.end());
    }
  } else if (path.extension() == ".json") {
    c = from_manifest(path);
  } else {
    c.name = path.stem().string();
    c.files.push_back(path);
  }
  std::set<std::string> names;
  for (const auto& f : c.files) {
    if (!fs::is_regular_file(f)) throw std::runtime_error("corpus file missing: " + f.string());
    if (!names.insert(f.stem().string()).second)
      throw std::runtime_error("duplicate problem name in corpus: " + f.stem().string());
  }
  return c;
}

std::vector<fol::Problem> load_problems(const Corpus& c) {
  std::vector<fol::Problem> out;
  for (const auto& f : c.files) out.push_back(fol::parse_tptp_file(f));
  return out;
}

std::vector<std::string> problem_names(const Corpus& c) {
  std::vector<std::string> out;
  for (const auto& f : c.files) out.push_back(f.stem().string());
  return out;
}

}  // namespace saturn::harness
