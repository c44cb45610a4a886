#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace saturn::vec {

enum class GnnKind { None, Gcn, Sage, Staged };

std::string_view gnn_name(GnnKind k);
/// Throws std::invalid_argument for names other than none/gcn/sage/staged.
GnnKind parse_gnn(std::string_view name);

struct VectorizerConfig {
  bool simple = true;
  bool chain = true;
  /// Term-walk modules, one per listed length (each in 1..3).
  std::vector<int> walk_lengths = {1, 2, 3};
  std::size_t n_age = 30;
  std::size_t d_chain = 64;
  std::size_t d_walk = 64;

  GnnKind gnn = GnnKind::None;
  /// Node embedding and graph output size.
  std::size_t d = 64;
  /// Update rounds.
  std::size_t rounds = 2;
  /// Hash buckets for symbol embeddings.
  std::size_t vocab = 1024;
  /// StagedGCN reads out the root node; false switches to mean pooling.
  bool root_readout = true;

  [[nodiscard]] std::size_t simple_length() const { return simple ? n_age + 3 : 0; }
  [[nodiscard]] std::size_t chain_length() const { return chain ? 2 * d_chain : 0; }
  [[nodiscard]] std::size_t walk_length() const { return walk_lengths.size() * d_walk; }
  [[nodiscard]] std::size_t sparse_length() const {
    return simple_length() + chain_length() + walk_length();
  }
  [[nodiscard]] std::size_t gnn_length() const { return gnn == GnnKind::None ? 0 : d; }
  [[nodiscard]] std::size_t length() const { return sparse_length() + gnn_length(); }

  /// Every problem found, one message each; empty when valid.
  [[nodiscard]] std::vector<std::string> validate() const;
};

}  // namespace saturn::vec
