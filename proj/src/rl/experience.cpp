#include "saturn/rl/experience.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "saturn/fol/tptp.hpp"
#include "saturn/vec/vectorizer.hpp"

namespace saturn::rl {

using nlohmann::json;

namespace {

nn::SparseMatrix sparse_block(const std::vector<fol::ClausePtr>& clauses, const fol::SymbolTable& symbols,
                              const vec::VectorizerConfig& vcfg) {
  std::vector<const fol::Clause*> raw;
  for (const auto& c : clauses) raw.push_back(c.get());
  return vec::sparse_columns(raw, symbols, vcfg);
}

fol::Role parse_role(const std::string& s) {
  if (s == "axiom") return fol::Role::Axiom;
  if (s == "negated_conjecture") return fol::Role::NegatedConjecture;
  if (s == "plain") return fol::Role::Derived;
  throw std::runtime_error("unknown clause role '" + s + "'");
}

}  // namespace

std::vector<Experience> build_experiences(const engine::EpisodeTrace& trace, const std::vector<double>& rewards,
                                          const vec::VectorizerConfig& vcfg, std::uint32_t iteration,
                                          std::uint64_t episode_id, double tau, const ExperienceOptions& opt,
                                          Rng& rng) {
  if (rewards.size() != trace.steps.size()) throw std::invalid_argument("one reward per trace step expected");
  if (!trace.final_state) throw std::invalid_argument("trace has no final state");
  const engine::ProofState& fs = *trace.final_state;

  std::vector<std::size_t> keep;
  std::vector<std::size_t> zeros;
  for (std::size_t i = 0; i < rewards.size(); ++i) (rewards[i] > 0.0 ? keep : zeros).push_back(i);
  const std::size_t take = std::min(opt.zero_samples, zeros.size());
  for (std::size_t i = 0; i < take; ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_index(rng, zeros.size() - i));
    std::swap(zeros[i], zeros[j]);
    keep.push_back(zeros[i]);
  }
  std::sort(keep.begin(), keep.end());
  if (keep.empty()) return {};

  // |C_t| for every step: processed is append-only, so C_t is a prefix.
  std::vector<std::size_t> processed_count(fs.history().size() + 1, 0);
  std::set<fol::ClauseId> seen;
  for (std::size_t t = 0; t < fs.history().size(); ++t) {
    seen.insert(fs.history()[t].action.clause);
    processed_count[t + 1] = seen.size();
  }

  std::vector<std::uint32_t> steps;
  for (std::size_t i : keep) steps.push_back(trace.steps[i].step);
  auto action_lists = engine::replay_actions(fs, steps);

  std::vector<Experience> out;
  fol::ClauseId max_id = 0;
  for (auto id : fs.conjecture()) max_id = std::max(max_id, id);
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const auto& ts = trace.steps[keep[k]];
    Experience x;
    x.step = ts.step;
    x.processed.assign(fs.processed().begin(),
                       fs.processed().begin() + static_cast<std::ptrdiff_t>(processed_count[ts.step]));
    x.actions = std::move(action_lists[k]);
    x.chosen = ts.action_index;
    x.reward = rewards[keep[k]];
    x.tau = tau;
    x.distribution = ts.distribution;
    for (auto id : x.processed) max_id = std::max(max_id, id);
    for (const auto& a : x.actions) max_id = std::max(max_id, a.clause);
    out.push_back(std::move(x));
  }

  auto rec = std::make_shared<EpisodeRecord>();
  rec->id = episode_id;
  rec->problem = trace.problem;
  rec->iteration = iteration;
  rec->symbols = fs.symbols_ptr();
  rec->clauses.assign(fs.clauses().begin(), fs.clauses().begin() + max_id + 1);
  rec->sparse = sparse_block(rec->clauses, fs.symbols(), vcfg);
  rec->conjecture = fs.conjecture();
  for (auto& x : out) x.episode = rec;
  return out;
}

void write_experiences(std::ostream& out, const std::vector<Experience>& xs) {
  std::set<const EpisodeRecord*> written;
  for (const auto& x : xs) {
    const EpisodeRecord& e = *x.episode;
    if (written.insert(&e).second) {
      json clauses = json::array();
      for (const auto& c : e.clauses)
        clauses.push_back({{"formula", fol::formula_string(*c, *e.symbols)},
                           {"age", c->age},
                           {"sos", c->sos},
                           {"role", fol::role_name(c->role)}});
      json j = {{"type", "episode"},       {"format", kExperienceFormat}, {"id", e.id},
                {"problem", e.problem},    {"iteration", e.iteration},    {"clauses", std::move(clauses)},
                {"conjecture", e.conjecture}};
      out << j.dump() << '\n';
    }
    json actions = json::array();
    for (const auto& a : x.actions) actions.push_back({a.clause, static_cast<int>(a.rule)});
    json j = {{"type", "experience"},  {"episode", e.id},          {"step", x.step},
              {"processed", x.processed}, {"actions", std::move(actions)}, {"chosen", x.chosen},
              {"reward", x.reward},     {"tau", x.tau},              {"distribution", x.distribution}};
    out << j.dump() << '\n';
  }
}

std::vector<Experience> read_experiences(std::istream& in, const vec::VectorizerConfig& vcfg) {
  std::unordered_map<std::uint64_t, std::shared_ptr<const EpisodeRecord>> episodes;
  std::vector<Experience> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      const std::string type = j.at("type");
      if (type == "episode") {
        if (j.at("format").get<int>() != kExperienceFormat) throw std::runtime_error("unsupported format");
        auto rec = std::make_shared<EpisodeRecord>();
        rec->id = j.at("id");
        rec->problem = j.at("problem");
        rec->iteration = j.at("iteration");
        auto symbols = std::make_shared<fol::SymbolTable>();
        fol::FreshVars fresh;
        for (const auto& jc : j.at("clauses")) {
          fol::Clause c;
          c.id = static_cast<fol::ClauseId>(rec->clauses.size());
          c.literals = fol::parse_literals(jc.at("formula").get<std::string>(), *symbols, fresh);
          c.age = jc.at("age");
          c.sos = jc.at("sos");
          c.role = parse_role(jc.at("role"));
          rec->clauses.push_back(std::make_shared<const fol::Clause>(std::move(c)));
        }
        rec->conjecture = j.at("conjecture").get<std::vector<fol::ClauseId>>();
        rec->symbols = symbols;
        rec->sparse = sparse_block(rec->clauses, *symbols, vcfg);
        episodes[rec->id] = rec;
      } else if (type == "experience") {
        Experience x;
        auto it = episodes.find(j.at("episode").get<std::uint64_t>());
        if (it == episodes.end()) throw std::runtime_error("reference to an unknown episode");
        x.episode = it->second;
        x.step = j.at("step");
        x.processed = j.at("processed").get<std::vector<fol::ClauseId>>();
        for (const auto& a : j.at("actions")) {
          const int rule = a.at(1);
          if (rule < 0 || rule >= static_cast<int>(fol::kNumRules)) throw std::runtime_error("bad rule index");
          x.actions.push_back({a.at(0).get<fol::ClauseId>(), static_cast<fol::InferenceRule>(rule)});
        }
        x.chosen = j.at("chosen");
        x.reward = j.at("reward");
        x.tau = j.at("tau");
        x.distribution = j.at("distribution").get<std::vector<double>>();
        const auto n = x.episode->clauses.size();
        bool ok = x.chosen < x.actions.size();
        for (auto id : x.processed) ok = ok && id < n;
        for (const auto& a : x.actions) ok = ok && a.clause < n;
        if (!ok) throw std::runtime_error("clause or action index out of range");
        out.push_back(std::move(x));
      } else {
        throw std::runtime_error("unknown record type '" + type + "'");
      }
    } catch (const json::exception& e) {
      throw std::runtime_error("experience line " + std::to_string(lineno) + ": " + e.what());
    } catch (const fol::ParseError& e) {
      throw std::runtime_error("experience line " + std::to_string(lineno) + ": " + e.what());
    } catch (const std::runtime_error& e) {
      throw std::runtime_error("experience line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void ExampleBuffer::add(std::uint32_t iteration, std::vector<Experience> xs) {
  auto& slot = by_iteration_[iteration];
  for (auto& x : xs) slot.push_back(std::move(x));
  while (!by_iteration_.empty() && by_iteration_.begin()->first + window_ < iteration)
    by_iteration_.erase(by_iteration_.begin());
}

std::vector<const Experience*> ExampleBuffer::all() const {
  std::vector<const Experience*> out;
  for (const auto& [_, xs] : by_iteration_)
    for (const auto& x : xs) out.push_back(&x);
  return out;
}

std::vector<std::uint32_t> ExampleBuffer::iterations() const {
  std::vector<std::uint32_t> out;
  for (const auto& [k, _] : by_iteration_) out.push_back(k);
  return out;
}

std::size_t ExampleBuffer::size() const {
  std::size_t n = 0;
  for (const auto& [_, xs] : by_iteration_) n += xs.size();
  return n;
}

}  // namespace saturn::rl
