#include "saturn/harness/metrics.hpp"

#include <charconv>
#include <sstream>

namespace saturn::harness {

namespace {

// Shortest text that parses back to the same double.
std::string num(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.push_back(sep);
    out += parts[i];
  }
  return out;
}

double ratio(std::size_t a, std::size_t b) { return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b); }

}  // namespace

const std::vector<std::string>& train_columns() {
  static const std::vector<std::string> cols = {
      "iteration",   "tau",          "attempted",    "solved",      "completion_ratio",
      "cumulative_solved", "best_solved", "mean_proof_steps", "mean_reward", "mean_entropy",
      "mean_loss",   "experiences",  "updates",      "failures",    "solved_problems"};
  return cols;
}

std::string train_header() { return join(train_columns(), ','); }

std::string train_row(const rl::IterationMetrics& m, std::size_t best_solved) {
  return join({std::to_string(m.iteration + 1), num(m.tau), std::to_string(m.attempted),
               std::to_string(m.solved.size()), num(ratio(m.solved.size(), m.attempted)),
               std::to_string(m.cumulative_solved), std::to_string(best_solved), num(m.mean_proof_steps),
               num(m.mean_reward), num(m.mean_entropy), num(m.mean_loss), std::to_string(m.experiences),
               std::to_string(m.updates), std::to_string(m.failures), join(m.solved, ';')},
              ',');
}

const std::vector<std::string>& eval_columns() {
  static const std::vector<std::string> cols = {"corpus",           "problems", "solved",         "completion_ratio",
                                                "mean_proof_steps", "failures", "solved_problems"};
  return cols;
}

std::string eval_header() { return join(eval_columns(), ','); }

std::string eval_row(const EvalSummary& s) {
  return join({s.corpus, std::to_string(s.problems), std::to_string(s.solved.size()),
               num(ratio(s.solved.size(), s.problems)), num(s.mean_proof_steps), std::to_string(s.failures),
               join(s.solved, ';')},
              ',');
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace saturn::harness
