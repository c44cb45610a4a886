#include "saturn/harness/protocol.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <unordered_map>

#include "saturn/fol/tptp.hpp"
#include "saturn/policy/guidance.hpp"

namespace saturn::harness {

using nlohmann::json;

namespace {

[[noreturn]] void sys_error(const std::string& what) {
  throw std::system_error(errno, std::generic_category(), what);
}

json error_reply(const std::string& session, const std::string& message) {
  return {{"type", "error"}, {"session", session}, {"message", message}};
}

}  // namespace

// Channels.

FdChannel::FdChannel(int in, int out, bool owned) : in_(in), out_(out), owned_(owned) {}

FdChannel::~FdChannel() {
  if (!owned_) return;
  ::close(in_);
  if (out_ != in_) ::close(out_);
}

void FdChannel::send(const std::string& line) {
  std::string data = line;
  data.push_back('\n');
  std::size_t done = 0;
  while (done < data.size()) {
    ssize_t n = ::send(out_, data.data() + done, data.size() - done, MSG_NOSIGNAL);
    if (n < 0 && errno == ENOTSOCK) n = ::write(out_, data.data() + done, data.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      sys_error("protocol write");
    }
    done += static_cast<std::size_t>(n);
  }
}

std::optional<std::string> FdChannel::receive() {
  for (;;) {
    if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    char chunk[65536];
    const ssize_t n = ::read(in_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR) continue;
      sys_error("protocol read");
    }
    if (n == 0) {
      if (buffer_.empty()) return std::nullopt;
      std::string line;
      line.swap(buffer_);
      return line;
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

void FdChannel::shutdown_write() {
  if (::shutdown(out_, SHUT_WR) != 0 && errno == ENOTSOCK) ::close(out_);
}

std::pair<std::unique_ptr<FdChannel>, std::unique_ptr<FdChannel>> channel_pair() {
  int fds[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM, 0, fds) != 0) sys_error("socketpair");
  return {std::make_unique<FdChannel>(fds[0], fds[0], true), std::make_unique<FdChannel>(fds[1], fds[1], true)};
}

namespace {

sockaddr_in address_of(const std::string& host, std::uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  const std::string h = host == "localhost" ? "127.0.0.1" : host;
  if (::inet_pton(AF_INET, h.c_str(), &addr.sin_addr) != 1)
    throw std::invalid_argument("not an IPv4 address: " + host);
  return addr;
}

}  // namespace

TcpListener::TcpListener(const std::string& host, std::uint16_t port) {
  const sockaddr_in addr = address_of(host, port);
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) sys_error("socket");
  const int one = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  if (::bind(fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof addr) != 0) {
    ::close(fd_);
    sys_error("bind " + host + ":" + std::to_string(port));
  }
  if (::listen(fd_, 16) != 0) {
    ::close(fd_);
    sys_error("listen");
  }
  sockaddr_in bound{};
  socklen_t len = sizeof bound;
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);
}

TcpListener::~TcpListener() {
  if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<FdChannel> TcpListener::accept() {
  for (;;) {
    const int c = ::accept(fd_, nullptr, nullptr);
    if (c >= 0) return std::make_unique<FdChannel>(c, c, true);
    if (errno != EINTR) sys_error("accept");
  }
}

std::unique_ptr<FdChannel> tcp_connect(const std::string& host, std::uint16_t port) {
  const sockaddr_in addr = address_of(host, port);
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) sys_error("socket");
  if (::connect(fd, reinterpret_cast<const sockaddr*>(&addr), sizeof addr) != 0) {
    ::close(fd);
    sys_error("connect " + host + ":" + std::to_string(port));
  }
  return std::make_unique<FdChannel>(fd, fd, true);
}

// Server.

struct GuidanceServer::Session {
  std::mutex mutex;
  engine::StateMirror mirror;
  std::unique_ptr<policy::NeuralGuidance> guidance;
  std::unordered_map<std::uint64_t, engine::ClauseId> local;  // remote id -> local id
  bool begun = false;

  explicit Session(std::string problem) : mirror(std::move(problem)) {}

  engine::ClauseId clause(const json& a) {
    const auto remote = a.at("clause_id").get<std::uint64_t>();
    if (auto it = local.find(remote); it != local.end()) return it->second;
    fol::Clause c;
    c.literals = fol::parse_literals(a.at("clause_tptp").get<std::string>(), mirror.symbols(), mirror.fresh());
    c.age = a.value("age", 0u);
    c.sos = a.value("sos", false);
    const auto id = mirror.add_clause(std::move(c));
    local.emplace(remote, id);
    return id;
  }
};

GuidanceServer::GuidanceServer(policy::Policy& policy, ServerOptions options)
    : policy_(policy), options_(options) {}

GuidanceServer::~GuidanceServer() = default;

std::size_t GuidanceServer::sessions() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

std::string GuidanceServer::handle(const std::string& line) {
  json msg;
  try {
    msg = json::parse(line);
  } catch (const json::exception& e) {
    return error_reply("", std::string("malformed message: ") + e.what()).dump();
  }
  const std::string session = msg.is_object() && msg.contains("session") && msg["session"].is_string()
                                  ? msg["session"].get<std::string>()
                                  : "";
  try {
    return dispatch(msg).dump();
  } catch (const json::exception& e) {
    return error_reply(session, std::string("malformed message: ") + e.what()).dump();
  } catch (const fol::ParseError& e) {
    return error_reply(session, std::string("bad clause: ") + e.what()).dump();
  } catch (const std::exception& e) {
    return error_reply(session, e.what()).dump();
  }
}

void GuidanceServer::serve(LineChannel& channel) {
  while (auto line = channel.receive()) {
    if (line->empty()) continue;
    channel.send(handle(*line));
  }
}

json GuidanceServer::dispatch(const json& msg) {
  if (!msg.is_object()) throw std::invalid_argument("malformed message: expected an object");
  const std::string type = msg.at("type");
  if (type == "init") return on_init(msg);
  const std::string id = msg.at("session");
  std::shared_ptr<Session> s;
  {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw std::invalid_argument("unknown session '" + id + "'");
    s = it->second;
  }
  std::lock_guard lock(s->mutex);
  if (type == "state") return on_state(*s, msg);
  if (type == "executed") return on_executed(*s, msg);
  if (type == "done") {
    std::lock_guard all(mutex_);
    sessions_.erase(id);
    return {{"type", "bye"}, {"session", id}};
  }
  throw std::invalid_argument("unknown message type '" + type + "'");
}

json GuidanceServer::on_init(const json& msg) {
  const std::string id = msg.at("session");
  const int version = msg.at("version");
  if (version != kProtocolVersion)
    return error_reply(id, "protocol version mismatch: endpoint speaks " + std::to_string(kProtocolVersion) +
                               ", got " + std::to_string(version));
  policy::NeuralGuidance::Options o;
  o.sample = msg.value("sample", options_.sample);
  o.tau = msg.value("tau", options_.tau);
  o.tau0 = msg.value("tau0", options_.tau0);
  o.seed = msg.value("seed", options_.seed);
  if (!(o.tau > 0.0)) throw std::invalid_argument("tau must be positive");
  auto s = std::make_shared<Session>(msg.value("problem", std::string()));
  s->guidance = std::make_unique<policy::NeuralGuidance>(policy_, o);
  std::lock_guard lock(mutex_);
  sessions_[id] = std::move(s);
  return {{"type", "ready"}, {"session", id}, {"version", kProtocolVersion}};
}

json GuidanceServer::on_state(Session& s, const json& msg) {
  const std::string id = msg.at("session");
  const auto status = engine::parse_status(msg.at("status").get<std::string>());
  if (status != engine::Status::Running) throw std::invalid_argument("episode is not running");
  const auto& acts = msg.at("actions");
  if (!acts.is_array() || acts.empty()) throw std::invalid_argument("no actions");
  if (s.mirror.state().conjecture().empty()) {
    std::vector<engine::ClauseId> conj;
    for (const auto& text : msg.at("conjecture")) {
      fol::Clause c;
      c.literals = fol::parse_literals(text.get<std::string>(), s.mirror.symbols(), s.mirror.fresh());
      c.role = fol::Role::NegatedConjecture;
      c.sos = true;
      conj.push_back(s.mirror.add_clause(std::move(c)));
    }
    if (conj.empty()) throw std::invalid_argument("state has no conjecture clauses");
    s.mirror.set_conjecture(std::move(conj));
  }
  std::vector<engine::Action> actions;
  for (const auto& a : acts) actions.push_back({s.clause(a), fol::parse_rule(a.at("rule").get<std::string>())});
  std::vector<engine::ClauseId> processed;
  for (const auto& p : msg.at("processed")) {
    auto it = s.local.find(p.get<std::uint64_t>());
    if (it == s.local.end()) throw std::invalid_argument("unknown processed clause " + p.dump());
    processed.push_back(it->second);
  }
  s.mirror.update(msg.at("step"), status, std::move(processed), std::move(actions));
  if (!s.begun) {
    s.guidance->begin(s.mirror.state());
    s.begun = true;
  }
  const engine::Decision d = s.guidance->choose(s.mirror.state());
  return {{"type", "select"}, {"session", id}, {"action_index", d.index}, {"distribution", d.distribution}};
}

json GuidanceServer::on_executed(Session& s, const json& msg) {
  for (const auto& d : msg.at("derived"))
    if (d.is_object() && d.contains("clause_tptp")) s.clause(d);
  return {{"type", "ack"}, {"session", msg.at("session")}};
}

// Client.

RemoteGuidance::RemoteGuidance(LineChannel& channel, std::string session, Options options)
    : channel_(channel), session_(std::move(session)), options_(options) {}

json RemoteGuidance::request(const json& msg, const char* expected) {
  channel_.send(msg.dump());
  auto line = channel_.receive();
  if (!line) throw ProtocolError("guidance endpoint closed the connection");
  json reply;
  try {
    reply = json::parse(*line);
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("unreadable reply: ") + e.what());
  }
  const std::string type = reply.value("type", "");
  if (type == "error") throw ProtocolError(reply.value("message", "error"));
  if (type != expected) throw ProtocolError("expected '" + std::string(expected) + "', got '" + type + "'");
  return reply;
}

const std::string& RemoteGuidance::text(const engine::ProofState& s, engine::ClauseId id) {
  if (texts_.size() <= id) texts_.resize(s.clauses().size());
  std::string& t = texts_[id];
  if (t.empty()) t = fol::formula_string(s.clause(id), s.symbols());
  return t;
}

void RemoteGuidance::begin(const engine::ProofState& state) {
  json msg = {{"type", "init"}, {"session", session_}, {"version", kProtocolVersion},
              {"problem", state.problem_name()}};
  if (options_.seed) msg["seed"] = *options_.seed;
  if (options_.sample) msg["sample"] = *options_.sample;
  if (options_.tau) msg["tau"] = *options_.tau;
  request(msg, "ready");
  reported_steps_ = 0;
  texts_.clear();
}

engine::Decision RemoteGuidance::choose(const engine::ProofState& state) {
  auto clause_json = [&](engine::ClauseId id) {
    const auto& c = state.clause(id);
    return json{{"clause_id", id}, {"clause_tptp", text(state, id)}, {"age", c.age}, {"sos", c.sos}};
  };
  for (; reported_steps_ < state.history().size(); ++reported_steps_) {
    json derived = json::array();
    for (auto id : state.history()[reported_steps_].derived) derived.push_back(clause_json(id));
    request({{"type", "executed"}, {"session", session_}, {"derived", std::move(derived)}}, "ack");
  }
  json actions = json::array();
  for (const auto& a : state.actions()) {
    json j = clause_json(a.clause);
    j["rule"] = fol::rule_name(a.rule);
    actions.push_back(std::move(j));
  }
  json conjecture = json::array();
  for (auto id : state.conjecture()) conjecture.push_back(text(state, id));
  const json reply = request({{"type", "state"},
                              {"session", session_},
                              {"step", state.step()},
                              {"status", engine::status_name(state.status())},
                              {"actions", std::move(actions)},
                              {"processed", state.processed()},
                              {"conjecture", std::move(conjecture)}},
                             "select");
  engine::Decision d;
  d.index = reply.at("action_index");
  if (reply.contains("distribution")) d.distribution = reply["distribution"].get<std::vector<double>>();
  return d;
}

void RemoteGuidance::finish(engine::Status status) {
  request({{"type", "done"}, {"session", session_}, {"status", engine::status_name(status)}}, "bye");
}

}  // namespace saturn::harness
