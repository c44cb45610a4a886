#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "saturn/engine/episode.hpp"
#include "saturn/policy/model.hpp"

namespace saturn::harness {

// Line-delimited JSON between a reasoner and a guidance endpoint.
//
//   reasoner -> guidance              guidance -> reasoner
//   init{session, version, problem?}  ready{session, version}
//   state{session, step, status,      select{session, action_index,
//         actions, processed,                distribution}
//         conjecture}
//   executed{session, derived}        ack{session}
//   done{session, status}             bye{session}
//
// Any request can instead be answered by error{session, message}. Actions
// are {rule, clause_tptp, clause_id, age, sos}; processed lists clause ids
// and conjecture lists clause texts. init may also carry seed, sample, tau
// and tau0 to override the endpoint's defaults for that session.

inline constexpr int kProtocolVersion = 1;

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Duplex stream of text lines.
class LineChannel {
 public:
  virtual ~LineChannel() = default;
  virtual void send(const std::string& line) = 0;
  /// Next line without its terminator; nullopt once the stream has ended.
  virtual std::optional<std::string> receive() = 0;
};

/// Channel over a pair of file descriptors (equal for sockets).
class FdChannel final : public LineChannel {
 public:
  FdChannel(int in, int out, bool owned);
  ~FdChannel() override;
  FdChannel(const FdChannel&) = delete;
  FdChannel& operator=(const FdChannel&) = delete;

  void send(const std::string& line) override;
  std::optional<std::string> receive() override;
  /// Stops further writes, so the peer sees end of stream.
  void shutdown_write();

 private:
  int in_;
  int out_;
  bool owned_;
  std::string buffer_;
};

/// Connected pair of local stream sockets.
std::pair<std::unique_ptr<FdChannel>, std::unique_ptr<FdChannel>> channel_pair();

class TcpListener {
 public:
  /// Port 0 picks a free port.
  TcpListener(const std::string& host, std::uint16_t port);
  ~TcpListener();
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  [[nodiscard]] std::uint16_t port() const noexcept { return port_; }
  std::unique_ptr<FdChannel> accept();

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

std::unique_ptr<FdChannel> tcp_connect(const std::string& host, std::uint16_t port);

struct ServerOptions {
  bool sample = false;
  double tau = 3.0;
  std::uint32_t tau0 = 11000;
  std::uint64_t seed = 0;
};

/// Guidance side: keeps one mirrored proof state and policy cache per
/// session id. Parameters are shared read-only between sessions.
class GuidanceServer {
 public:
  GuidanceServer(policy::Policy& policy, ServerOptions options);
  ~GuidanceServer();

  /// Reply to one request line. Safe to call from several threads; a
  /// failed request leaves its session as it was before.
  std::string handle(const std::string& line);
  /// Answers requests until the channel ends.
  void serve(LineChannel& channel);

  [[nodiscard]] std::size_t sessions() const;

 private:
  struct Session;
  nlohmann::json dispatch(const nlohmann::json& msg);
  nlohmann::json on_init(const nlohmann::json& msg);
  nlohmann::json on_state(Session& s, const nlohmann::json& msg);
  nlohmann::json on_executed(Session& s, const nlohmann::json& msg);

  policy::Policy& policy_;
  ServerOptions options_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

/// Reasoner side: asks a remote endpoint for every decision.
class RemoteGuidance final : public engine::Guidance {
 public:
  struct Options {
    std::optional<std::uint64_t> seed;
    std::optional<bool> sample;
    std::optional<double> tau;
  };

  RemoteGuidance(LineChannel& channel, std::string session, Options options = {});

  void begin(const engine::ProofState& state) override;
  engine::Decision choose(const engine::ProofState& state) override;
  /// Reports the final status and closes the session.
  void finish(engine::Status status);

 private:
  nlohmann::json request(const nlohmann::json& msg, const char* expected);
  const std::string& text(const engine::ProofState& s, engine::ClauseId id);

  LineChannel& channel_;
  std::string session_;
  Options options_;
  std::size_t reported_steps_ = 0;
  std::vector<std::string> texts_;
};

}  // namespace saturn::harness
