#include "saturn/harness/commands.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <thread>
#include <unistd.h>

#include "saturn/fol/dag.hpp"
#include "saturn/fol/tptp.hpp"
#include "saturn/nn/grad_check.hpp"
#include "saturn/policy/guidance.hpp"
#include "saturn/rl/loss.hpp"
#include "saturn/vec/gnn.hpp"
#include "saturn/vec/vectorizer.hpp"

namespace saturn::harness {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<engine::EpisodeTrace> run_problems(const std::vector<fol::Problem>& problems,
                                               const GuidanceFactory& make, const engine::Limits& limits,
                                               const engine::EngineOptions& options, std::size_t jobs) {
  std::vector<engine::EpisodeTrace> traces(problems.size());
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < problems.size(); i += stride) {
      auto g = make(i);
      traces[i] = engine::run_episode(problems[i], *g, limits, options);
    }
  };
  jobs = std::max<std::size_t>(1, std::min(jobs, problems.size()));
  if (jobs == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < jobs; ++k) pool.emplace_back(work, k, jobs);
  }
  return traces;
}

// Checkpoints.

fs::path checkpoint_path(const fs::path& run_dir, std::size_t k) {
  std::ostringstream name;
  name << "iter_" << std::setw(4) << std::setfill('0') << k << ".json";
  return run_dir / "checkpoints" / name.str();
}

nn::Checkpoint training_checkpoint(const policy::Policy& p, rl::Trainer& trainer, const RunConfig& cfg) {
  nn::Checkpoint ck;
  ck.params = p.params;
  ck.optimizer = trainer.optimizer();
  ck.meta = {{"config", config_to_json(cfg)}, {"trainer", trainer.state_json()}};
  return ck;
}

policy::Policy load_policy(const fs::path& path, RunConfig* cfg_out) {
  nn::Checkpoint ck = nn::load_checkpoint(path);
  RunConfig cfg;
  if (ck.meta.contains("config")) {
    try {
      cfg = parse_config(ck.meta["config"]);
    } catch (const ConfigError& e) {
      throw nn::CheckpointError(std::string("checkpoint configuration: ") + e.what());
    }
  }
  policy::Policy p = policy::make_policy(cfg.vec, cfg.policy, cfg.train.seed);
  for (const auto& name : policy::expected_parameters(cfg.vec, cfg.policy))
    if (!ck.params.contains(name)) throw nn::CheckpointError("checkpoint lacks parameter " + name);
  nn::params_from_json(nn::params_to_json(ck.params), p.params);
  if (cfg_out) *cfg_out = cfg;
  return p;
}

namespace {

void save_atomic(const fs::path& path, const std::function<void(const fs::path&)>& write) {
  const fs::path tmp = path.string() + ".tmp";
  write(tmp);
  fs::rename(tmp, path);
}

policy::Policy random_policy(const RunConfig& cfg) { return policy::make_policy(cfg.vec, cfg.policy, cfg.train.seed); }

std::unique_ptr<engine::Guidance> baseline_guidance(const std::string& name, std::uint64_t seed) {
  if (name == "fifo") return std::make_unique<engine::FifoGuidance>();
  if (name == "random") return std::make_unique<engine::RandomGuidance>(seed);
  if (name == "heuristic") return std::make_unique<engine::AgeWeightGuidance>();
  return nullptr;
}

std::string proof_listing(const engine::ProofState& s, const engine::RefutationProof& proof) {
  std::ostringstream out;
  for (auto id : proof.closure) {
    const fol::Clause& c = s.clause(id);
    out << "  " << id << ". " << fol::formula_string(c, s.symbols()) << "  [";
    if (c.parents.empty()) {
      out << fol::role_name(c.role);
      if (!c.name.empty()) out << " " << c.name;
    } else {
      out << fol::rule_name(c.parents.front().rule);
      for (std::size_t i = 0; i < c.parents.size(); ++i) out << (i ? "," : " ") << c.parents[i].clause;
    }
    out << "]\n";
  }
  return out.str();
}

}  // namespace

// prove

int cmd_prove(const ProveOptions& o, std::ostream& out, std::ostream& err) {
  try {
    const fol::Problem p = fol::parse_tptp_file(o.problem);
    std::unique_ptr<engine::Guidance> g = baseline_guidance(o.policy, o.seed);
    std::optional<policy::Policy> pol;
    if (!g) {
      pol.emplace(load_policy(o.policy));
      g = std::make_unique<policy::NeuralGuidance>(*pol, policy::NeuralGuidance::Options{.sample = false,
                                                                                          .seed = o.seed});
    }
    const auto trace = engine::run_episode(p, *g, o.limits, o.engine);
    out << "problem " << p.name << "\n"
        << "status " << engine::status_name(trace.status) << "\n"
        << "steps " << trace.steps.size() << "\n"
        << "seconds " << std::fixed << std::setprecision(3) << trace.seconds << std::defaultfloat << "\n";
    if (trace.policy_failed) out << "policy failure: " << trace.failure << "\n";
    if (trace.solved()) {
      out << "proof (" << trace.proof->steps.size() << " steps, " << trace.proof->closure.size() << " clauses)\n"
          << proof_listing(*trace.final_state, *trace.proof);
      return 0;
    }
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

// train

namespace {

std::vector<std::string> read_lines(const fs::path& path) {
  std::vector<std::string> lines;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

json comparable(json j) {
  j.erase("iterations");
  j.erase("jobs");
  return j;
}

}  // namespace

int cmd_train(const TrainOptions& o, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig& cfg = o.config;
    if (auto errors = validate(cfg); !errors.empty()) throw ConfigError(errors);
    const Corpus corpus = load_corpus(o.corpus);
    std::vector<fol::Problem> problems = load_problems(corpus);
    fs::create_directories(o.output / "checkpoints");

    // Resume from the newest checkpoint not beyond the requested count.
    std::size_t done = 0;
    for (std::size_t k = cfg.train.iterations; k >= 1; --k) {
      if (fs::exists(checkpoint_path(o.output, k))) {
        done = k;
        break;
      }
    }

    policy::Policy pol = random_policy(cfg);
    rl::Trainer trainer(pol, cfg.train, problems);
    const fs::path csv = o.output / "metrics.csv";
    std::size_t best = 0;
    if (done > 0) {
      const fs::path ckp = checkpoint_path(o.output, done);
      nn::Checkpoint ck = nn::load_checkpoint(ckp);
      if (comparable(ck.meta.at("config")) != comparable(config_to_json(cfg)))
        throw std::runtime_error("configuration differs from the one in " + ckp.string());
      nn::params_from_json(nn::params_to_json(ck.params), pol.params);
      if (ck.optimizer) trainer.optimizer() = *ck.optimizer;
      trainer.restore_state(ck.meta.at("trainer"));
      std::ifstream bin(ckp.string() + ".buffer.jsonl");
      if (!bin) throw std::runtime_error("missing experience buffer for " + ckp.string());
      std::map<std::uint32_t, std::vector<rl::Experience>> by_iteration;
      for (auto& x : rl::read_experiences(bin, pol.vec)) by_iteration[x.episode->iteration].push_back(std::move(x));
      for (auto& [it, xs] : by_iteration) trainer.buffer().add(it, std::move(xs));
      // Keep the rows of finished iterations only.
      auto lines = read_lines(csv);
      std::ofstream rewrite(csv, std::ios::trunc);
      rewrite << train_header() << "\n";
      for (std::size_t i = 1; i < lines.size() && i <= done; ++i) {
        rewrite << lines[i] << "\n";
        const auto cols = split_row(lines[i]);
        if (cols.size() > 3) best = std::max<std::size_t>(best, std::stoul(cols[3]));
      }
      out << "resuming after iteration " << done << "\n";
    } else {
      std::ofstream header(csv, std::ios::trunc);
      header << train_header() << "\n";
    }
    {
      std::ofstream cj(o.output / "config.json");
      cj << config_to_json(cfg).dump(2) << "\n";
    }

    std::ofstream rows(csv, std::ios::app);
    for (std::size_t k = done + 1; k <= cfg.train.iterations; ++k) {
      const rl::IterationMetrics m = trainer.run_iteration();
      best = std::max(best, m.solved.size());
      rows << train_row(m, best) << "\n" << std::flush;
      const fs::path ckp = checkpoint_path(o.output, k);
      save_atomic(ckp.string() + ".buffer.jsonl", [&](const fs::path& tmp) {
        std::ofstream bout(tmp);
        std::vector<rl::Experience> all;
        for (const auto* x : trainer.buffer().all()) all.push_back(*x);
        rl::write_experiences(bout, all);
      });
      save_atomic(ckp, [&](const fs::path& tmp) { nn::save_checkpoint(tmp, training_checkpoint(pol, trainer, cfg)); });
      out << "iteration " << k << ": solved " << m.solved.size() << "/" << m.attempted << ", cumulative "
          << m.cumulative_solved << ", entropy " << m.mean_entropy << ", loss " << m.mean_loss << "\n";
    }
    return 0;
  } catch (const ConfigError& e) {
    for (const auto& m : e.errors()) err << "config error: " << m << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

// eval

EvalSummary evaluate(policy::Policy& p, const std::vector<fol::Problem>& problems, const std::string& corpus,
                     const engine::Limits& limits, const engine::EngineOptions& engine, std::uint64_t seed,
                     std::size_t jobs) {
  const auto traces = run_problems(
      problems,
      [&](std::size_t i) {
        return std::make_unique<policy::NeuralGuidance>(
            p, policy::NeuralGuidance::Options{.sample = false, .seed = derive_seed(seed, i)});
      },
      limits, engine, jobs);
  EvalSummary s;
  s.corpus = corpus;
  s.problems = problems.size();
  double steps = 0.0;
  for (const auto& t : traces) {
    if (t.policy_failed) ++s.failures;
    if (t.solved()) {
      s.solved.push_back(t.problem);
      steps += static_cast<double>(t.proof->steps.size());
    }
  }
  if (!s.solved.empty()) s.mean_proof_steps = steps / static_cast<double>(s.solved.size());
  return s;
}

int cmd_eval(const EvalOptions& o, std::ostream& out, std::ostream& err) {
  try {
    RunConfig cfg;
    policy::Policy pol = load_policy(o.checkpoint, &cfg);
    const Corpus corpus = load_corpus(o.corpus);
    std::vector<fol::Problem> problems = load_problems(corpus);
    if (o.train_corpus) {
      const auto names = problem_names(load_corpus(*o.train_corpus));
      const std::set<std::string> seen(names.begin(), names.end());
      const auto before = problems.size();
      std::erase_if(problems, [&](const fol::Problem& p) { return seen.contains(p.name); });
      out << "filtered " << before - problems.size() << " problems shared with the training corpus\n";
    }
    if (problems.empty()) err << "warning: no problems left to evaluate\n";
    const EvalSummary s = evaluate(pol, problems, corpus.name, o.limits, cfg.train.engine, o.seed, o.jobs);
    const std::string table = eval_header() + "\n" + eval_row(s) + "\n";
    if (o.output.empty()) {
      out << table;
    } else {
      if (o.output.has_parent_path()) fs::create_directories(o.output.parent_path());
      std::ofstream f(o.output);
      f << table;
      if (!f) throw std::runtime_error("cannot write " + o.output.string());
      out << "solved " << s.solved.size() << "/" << s.problems << "\n";
    }
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

// gen-corpus

int cmd_gen_corpus(const GenCorpusOptions& o, std::ostream& out, std::ostream& err) {
  try {
    const auto problems = generate_family(o.family, o.size, o.seed);
    const std::string name = o.name.empty() ? std::string(family_name(o.family)) : o.name;
    write_corpus(o.output, name, o.family, problems, o.seed);
    out << "wrote " << problems.size() << " problems to " << o.output.string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

// serve

int cmd_serve(const ServeOptions& o, std::ostream& out, std::ostream& err) {
  try {
    policy::Policy pol = load_policy(o.checkpoint);
    GuidanceServer server(pol, o.server);
    if (o.stdio) {
      FdChannel ch(STDIN_FILENO, STDOUT_FILENO, false);
      server.serve(ch);
      return 0;
    }
    TcpListener listener(o.host, o.port);
    out << "listening on " << o.host << ":" << listener.port() << std::endl;
    for (;;) {
      std::shared_ptr<FdChannel> ch = listener.accept();
      std::thread([&server, ch] {
        try {
          server.serve(*ch);
        } catch (const std::exception&) {
          // The connection dropped; its sessions stay until re-initialised.
        }
      }).detach();
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

// grad-check

namespace {

nn::Matrix uniform_matrix(nn::Index r, nn::Index c, Rng& rng) {
  nn::Matrix m(r, c);
  for (nn::Index j = 0; j < c; ++j)
    for (nn::Index i = 0; i < r; ++i) m(i, j) = uniform(rng, -1.0, 1.0);
  return m;
}

// Moves entries at least 0.05 away from zero and makes every row's entries
// differ by at least 0.05, so relu and max pooling are smooth near them.
nn::Matrix off_kinks(nn::Matrix m) {
  for (nn::Index i = 0; i < m.rows(); ++i) {
    for (nn::Index j = 0; j < m.cols(); ++j) {
      m(i, j) = (m(i, j) < 0 ? -1.0 : 1.0) * (0.05 + std::abs(m(i, j)));
      m(i, j) += 0.11 * static_cast<double>(j) * (i % 2 ? -1.0 : 1.0);
    }
  }
  return m;
}

}  // namespace

std::vector<GradCheckItem> grad_check_suite(std::uint64_t seed) {
  using namespace nn;
  Rng rng(seed);
  std::vector<GradCheckItem> out;
  auto check = [&](const std::string& name, const std::function<Var(Tape&, const Var&)>& f, const Matrix& x) {
    out.push_back({name, grad_check(f, x)});
  };
  const Matrix a = off_kinks(uniform_matrix(3, 4, rng));
  const Matrix probe = uniform_matrix(3, 4, rng);
  const Matrix m = uniform_matrix(4, 2, rng);
  const Matrix col = uniform_matrix(3, 1, rng);
  auto weighted = [](Tape& t, const Var& y, const Matrix& w) { return sum(hadamard(y, t.constant(w))); };

  check("matmul", [&](Tape& t, const Var& x) { return sum(matmul(x, t.constant(m))); }, a);
  check("add", [&](Tape& t, const Var& x) { return weighted(t, add(x, hadamard(x, x)), probe); }, a);
  check("sub", [&](Tape& t, const Var& x) { return weighted(t, sub(t.constant(probe), hadamard(x, x)), probe); }, a);
  check("add_bias", [&](Tape& t, const Var& x) { return weighted(t, add_bias(t.constant(probe), x), probe); }, col);
  const Matrix lin_x = uniform_matrix(4, 3, rng), lin_b = uniform_matrix(2, 1, rng), lin_probe = uniform_matrix(2, 3, rng);
  check("linear", [&](Tape& t, const Var& w) {
    return weighted(t, linear(t.constant(lin_x), w, t.constant(lin_b)), lin_probe);
  }, uniform_matrix(2, 4, rng));
  check("scale", [&](Tape& t, const Var& x) { return weighted(t, scale(x, -1.7), probe); }, a);
  check("hadamard", [&](Tape& t, const Var& x) { return weighted(t, hadamard(x, x), probe); }, a);
  check("transpose", [&](Tape& t, const Var& x) { return weighted(t, transpose(x), probe.transpose()); }, a);
  check("relu", [&](Tape& t, const Var& x) { return weighted(t, relu(x), probe); }, a);
  check("tanh", [&](Tape& t, const Var& x) { return weighted(t, nn::tanh(x), probe); }, a);
  check("exp", [&](Tape& t, const Var& x) { return weighted(t, nn::exp(x), probe); }, a);
  check("sum", [&](Tape&, const Var& x) { return sum(hadamard(x, x)); }, a);
  check("mean", [&](Tape&, const Var& x) { return mean(hadamard(x, x)); }, a);
  check("pick", [&](Tape&, const Var& x) { return pick(hadamard(x, x), 2, 1); }, a);
  const Matrix probe6 = uniform_matrix(6, 4, rng), probe8 = uniform_matrix(3, 8, rng), probe3 = uniform_matrix(3, 3, rng),
               probe2 = uniform_matrix(3, 2, rng);
  check("concat", [&](Tape& t, const Var& x) {
    return weighted(t, concat({x, scale(x, 2.0)}), probe6);
  }, a);
  check("hcat", [&](Tape& t, const Var& x) {
    const Var parts[] = {x, hadamard(x, x)};
    return weighted(t, hcat(parts), probe8);
  }, a);
  check("select_columns", [&](Tape& t, const Var& x) {
    const Index cols[] = {3, 0, 0};
    return weighted(t, select_columns(x, cols), probe3);
  }, a);
  check("column_block", [&](Tape& t, const Var& x) { return weighted(t, column_block(x, 1, 2), probe2); }, a);
  check("mean_pool", [&](Tape& t, const Var& x) { return weighted(t, mean_pool(x), col); }, a);
  check("max_pool_columns", [&](Tape& t, const Var& x) { return weighted(t, max_pool_columns(x), col); }, a);
  const Matrix gain = uniform_matrix(3, 1, rng).array() + 1.5;
  check("layer_norm", [&](Tape& t, const Var& x) {
    return weighted(t, layer_norm(x, t.constant(gain), t.constant(col)), probe);
  }, a);
  check("dropout", [&](Tape& t, const Var& x) {
    Rng r(seed + 9);
    return weighted(t, dropout(x, 0.5, true, r), probe);
  }, a);
  check("log_softmax", [&](Tape&, const Var& x) { return pick(log_softmax(mean_pool(x), 3.0), 1); }, a);
  check("entropy_from_log", [&](Tape&, const Var& x) { return entropy_from_log(log_softmax(mean_pool(x), 0.7)); }, a);
  {
    Eigen::SparseMatrix<double> sp(4, 3);
    sp.insert(0, 0) = 1.0;
    sp.insert(2, 0) = -0.5;
    sp.insert(3, 2) = 2.0;
    sp.makeCompressed();
    check("matmul_sparse", [&](Tape& t, const Var& w) { return weighted(t, matmul_sparse(w, sp), probe.leftCols(3)); },
          uniform_matrix(3, 4, rng));
  }

  // Vectorizer GNNs, the policy and the loss, checked against their parameters.
  const fol::Problem p = fol::parse_tptp(
      "cnf(a, axiom, p(a, f(X))).\n"
      "cnf(b, axiom, ~p(X, Y) | q(g(X, Y), X)).\n"
      "cnf(c, axiom, ~q(X, a) | r(X) | r(f(a))).\n"
      "cnf(d, axiom, s(X) | s(Y) | ~r(X)).\n"
      "cnf(e, negated_conjecture, ~r(f(a))).\n",
      "gradcheck");
  std::vector<const fol::Clause*> clauses = p.inputs();
  for (auto kind : {vec::GnnKind::Gcn, vec::GnnKind::Sage, vec::GnnKind::Staged}) {
    vec::VectorizerConfig vc;
    vc.gnn = kind;
    vc.d = 4;
    vc.vocab = 16;
    ParamStore params;
    Rng init(seed + 1);
    vec::init_gnn_params(params, vc, init);
    const Matrix w = uniform_matrix(4, static_cast<Index>(clauses.size()), rng);
    std::vector<Parameter*> ps;
    for (auto& [_, prm] : params.entries()) ps.push_back(&prm);
    const double e = grad_check_params(
        [&](Tape& t) { return sum(hadamard(vec::gnn_columns(t, clauses, *p.symbols, params, vc), t.constant(w))); },
        ps, 1e-5, 16);
    out.push_back({"gnn." + std::string(vec::gnn_name(kind)), e});
  }

  vec::VectorizerConfig vc;
  vc.n_age = 5;
  vc.d_chain = 8;
  vc.d_walk = 8;
  vc.walk_lengths = {1, 2};
  vc.gnn = vec::GnnKind::Staged;
  vc.d = 4;
  vc.vocab = 16;
  policy::PolicyConfig pc;
  pc.d = 3;
  policy::Policy pol = policy::make_policy(vc, pc, seed + 2);
  // Zero-initialised biases put relu inputs exactly on the kink; nudge every
  // parameter by a random offset.
  Rng nudge(seed + 5);
  for (auto& [_, prm] : pol.params.entries())
    for (Index i = 0; i < prm.value.size(); ++i) prm.value(i) += uniform(nudge, -0.3, 0.3);
  policy::NeuralGuidance g(pol, {.sample = true, .tau = 2.0, .tau0 = 1000, .seed = seed + 3});
  const auto trace = engine::run_episode(p, g, {40, 100.0});
  std::vector<double> rewards(trace.steps.size());
  for (std::size_t i = 0; i < rewards.size(); ++i) rewards[i] = 1.0 + 0.25 * static_cast<double>(i % 4);
  Rng pick_rng(seed + 4);
  auto xs = rl::build_experiences(trace, rewards, vc, 0, 0, 2.0, {}, pick_rng);
  std::vector<const rl::Experience*> batch;
  for (std::size_t i = 0; i < xs.size() && batch.size() < 4; ++i) batch.push_back(&xs[i]);
  std::vector<Parameter*> ps;
  for (auto& [_, prm] : pol.params.entries()) ps.push_back(&prm);
  if (!batch.empty()) {
    const rl::Experience* one[] = {batch.front()};
    Rng dirs(seed + 6);
    out.push_back({"policy.log_prob", grad_check_directions(
                                          [&](Tape& t) { return rl::compute_loss(t, pol, one, 0.0, false, nullptr).loss; },
                                          ps, dirs)});
    out.push_back({"loss", grad_check_directions(
                               [&](Tape& t) { return rl::compute_loss(t, pol, batch, 0.004, false, nullptr).loss; },
                               ps, dirs)});
  }
  return out;
}

int cmd_grad_check(std::uint64_t seed, double tolerance, std::ostream& out) {
  const auto items = grad_check_suite(seed);
  bool ok = !items.empty();
  for (const auto& it : items) {
    const bool pass = it.error < tolerance;
    ok = ok && pass;
    out << std::left << std::setw(20) << it.name << " " << std::scientific << std::setprecision(3) << it.error
        << std::defaultfloat << (pass ? "  ok" : "  FAIL") << "\n";
  }
  out << (ok ? "all gradients match" : "gradient mismatch") << "\n";
  return ok ? 0 : 1;
}

}  // namespace saturn::harness
