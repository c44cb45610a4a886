#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "saturn/harness/commands.hpp"

using namespace saturn;
using namespace saturn::harness;

namespace {

// Writes to --output when given, to stdout otherwise.
class OutputSink {
 public:
  explicit OutputSink(const std::string& path) {
    if (!path.empty()) file_.open(path);
    if (!path.empty() && !file_) throw std::runtime_error("cannot write " + path);
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"saturn: a saturation prover with learned clause selection"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::string output;
  app.add_option("--config", config_path, "Flat JSON configuration")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Seed for every random choice");
  app.add_option("--jobs", jobs, "Concurrent episodes")->check(CLI::PositiveNumber);
  app.add_option("--output", output, "Output file or run directory");

  auto run_config = [&] {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (seed) cfg.train.seed = *seed;
    if (jobs) cfg.train.jobs = *jobs;
    return cfg;
  };

  ProveOptions prove;
  std::string prove_problem;
  auto* c_prove = app.add_subcommand("prove", "Run the prover on one TPTP CNF problem");
  c_prove->add_option("problem", prove_problem, "Problem file")->required();
  c_prove->add_option("--policy", prove.policy, "fifo, random, heuristic or a checkpoint file")->capture_default_str();
  c_prove->add_option("--max-steps", prove.limits.max_steps, "Step limit")->capture_default_str();
  c_prove->add_option("--max-seconds", prove.limits.max_seconds, "Wall-clock limit")->capture_default_str();

  std::string train_corpus;
  std::optional<std::size_t> train_iterations;
  auto* c_train = app.add_subcommand("train", "Train a policy on a corpus; --output names the run directory");
  c_train->add_option("corpus", train_corpus, "Corpus manifest, directory or problem file")->required();
  c_train->add_option("--iterations", train_iterations, "Overrides the configured iteration count");

  EvalOptions eval;
  std::string eval_corpus, eval_checkpoint, eval_train_corpus;
  auto* c_eval = app.add_subcommand("eval", "Greedy evaluation of a checkpoint; --output names the CSV file");
  c_eval->add_option("corpus", eval_corpus, "Corpus to evaluate")->required();
  c_eval->add_option("--checkpoint", eval_checkpoint, "Checkpoint file")->required()->check(CLI::ExistingFile);
  c_eval->add_option("--train-corpus", eval_train_corpus, "Skip problems listed by this corpus");
  c_eval->add_option("--max-steps", eval.limits.max_steps, "Step limit")->capture_default_str();
  c_eval->add_option("--max-seconds", eval.limits.max_seconds, "Wall-clock limit")->capture_default_str();

  GenCorpusOptions gen;
  std::string gen_family = "marker-predicate";
  auto* c_gen = app.add_subcommand("gen-corpus", "Generate a synthetic corpus into the --output directory");
  c_gen->add_option("--family", gen_family, "chain-resolution, marker-predicate, pigeonhole-small or random-cnf")
      ->capture_default_str();
  c_gen->add_option("--size", gen.size, "Number of problems")->capture_default_str()->check(CLI::PositiveNumber);
  c_gen->add_option("--name", gen.name, "Corpus name (defaults to the family)");

  ServeOptions serve;
  std::string serve_checkpoint;
  auto* c_serve = app.add_subcommand("serve", "Answer guidance requests over stdio or TCP");
  c_serve->add_option("--checkpoint", serve_checkpoint, "Checkpoint file")->required()->check(CLI::ExistingFile);
  c_serve->add_flag("--stdio", serve.stdio, "Use stdin and stdout instead of TCP");
  c_serve->add_option("--host", serve.host, "Listen address")->capture_default_str();
  c_serve->add_option("--port", serve.port, "Listen port, 0 picks a free one")->capture_default_str();
  c_serve->add_flag("--sample", serve.server.sample, "Sample actions instead of taking the argmax");
  c_serve->add_option("--tau", serve.server.tau, "Default temperature")->capture_default_str();
  c_serve->add_option("--tau0", serve.server.tau0, "Step after which selection is greedy")->capture_default_str();

  double tolerance = 1e-4;
  auto* c_grad = app.add_subcommand("grad-check", "Finite-difference check of every gradient");
  c_grad->add_option("--tolerance", tolerance, "Largest accepted relative error")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c_prove) {
      RunConfig cfg = run_config();
      prove.problem = prove_problem;
      prove.engine = cfg.train.engine;
      prove.seed = cfg.train.seed;
      OutputSink sink(output);
      return cmd_prove(prove, sink.stream(), std::cerr);
    }
    if (*c_train) {
      if (output.empty()) throw std::runtime_error("train needs --output for the run directory");
      RunConfig cfg = run_config();
      if (train_iterations) cfg.train.iterations = *train_iterations;
      return cmd_train({train_corpus, cfg, output}, std::cout, std::cerr);
    }
    if (*c_eval) {
      RunConfig cfg = run_config();
      eval.corpus = eval_corpus;
      eval.checkpoint = eval_checkpoint;
      if (!eval_train_corpus.empty()) eval.train_corpus = eval_train_corpus;
      eval.seed = cfg.train.seed;
      eval.jobs = cfg.train.jobs;
      eval.output = output;
      return cmd_eval(eval, std::cout, std::cerr);
    }
    if (*c_gen) {
      if (output.empty()) throw std::runtime_error("gen-corpus needs --output for the corpus directory");
      gen.family = parse_family(gen_family);
      gen.seed = run_config().train.seed;
      gen.output = output;
      return cmd_gen_corpus(gen, std::cout, std::cerr);
    }
    if (*c_serve) {
      serve.checkpoint = serve_checkpoint;
      serve.server.seed = run_config().train.seed;
      return cmd_serve(serve, std::cerr, std::cerr);
    }
    if (*c_grad) {
      OutputSink sink(output);
      return cmd_grad_check(run_config().train.seed, tolerance, sink.stream());
    }
  } catch (const ConfigError& e) {
    for (const auto& m : e.errors()) std::cerr << "config error: " << m << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
