#include "asal/embedding/sidecar_client.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <map>
#include <json.hpp>
#include <stdexcept>

#include "asal/core/errors.hpp"
#include "asal/core/image.hpp"

namespace asal {

using nlohmann::json;

SidecarAddress SidecarAddress::parse(const std::string& text) {
  SidecarAddress a;
  if (text.rfind("stdio:", 0) == 0) {
    a.kind = Kind::Stdio;
    a.command = text.substr(6);
    if (a.command.empty()) throw std::invalid_argument("stdio sidecar address needs a command");
    return a;
  }
  std::string rest = text;
  if (rest.rfind("tcp://", 0) == 0) rest = rest.substr(6);
  const auto colon = rest.rfind(':');
  if (colon == std::string::npos) throw std::invalid_argument("sidecar address must be tcp://host:port or stdio:cmd");
  a.kind = Kind::Tcp;
  a.host = rest.substr(0, colon);
  try {
    a.port = std::stoi(rest.substr(colon + 1));
  } catch (const std::exception&) {
    throw std::invalid_argument("bad sidecar port in '" + text + "'");
  }
  return a;
}

std::string SidecarAddress::to_string() const {
  return kind == Kind::Stdio ? "stdio:" + command : "tcp://" + host + ":" + std::to_string(port);
}

namespace {

// Buffered line reading over a file descriptor.
class FdLineReader {
 public:
  explicit FdLineReader(int fd) : fd_(fd) {}

  std::string read_line() {
    while (true) {
      const auto nl = buffer_.find('\n');
      if (nl != std::string::npos) {
        std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        return line;
      }
      char chunk[65536];
      const ssize_t n = ::read(fd_, chunk, sizeof(chunk));
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) throw BackendUnavailable("sidecar closed the connection");
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

 private:
  int fd_;
  std::string buffer_;
};

void write_all(int fd, const std::string& data) {
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::write(fd, data.data() + off, data.size() - off);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) throw BackendUnavailable(std::string("sidecar write failed: ") + std::strerror(errno));
    off += static_cast<std::size_t>(n);
  }
}

class TcpChannel final : public LineChannel {
 public:
  TcpChannel(const std::string& host, int port) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    if (::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res) != 0 || !res)
      throw BackendUnavailable("cannot resolve sidecar host " + host);
    for (addrinfo* p = res; p; p = p->ai_next) {
      fd_ = ::socket(p->ai_family, p->ai_socktype, p->ai_protocol);
      if (fd_ < 0) continue;
      if (::connect(fd_, p->ai_addr, p->ai_addrlen) == 0) break;
      ::close(fd_);
      fd_ = -1;
    }
    ::freeaddrinfo(res);
    if (fd_ < 0) throw BackendUnavailable("cannot connect to sidecar at " + host + ":" + std::to_string(port));
    reader_ = std::make_unique<FdLineReader>(fd_);
  }
  ~TcpChannel() override {
    if (fd_ >= 0) ::close(fd_);
  }

  void write_line(const std::string& line) override { write_all(fd_, line + "\n"); }
  std::string read_line() override { return reader_->read_line(); }

 private:
  int fd_ = -1;
  std::unique_ptr<FdLineReader> reader_;
};

class ProcessChannel final : public LineChannel {
 public:
  explicit ProcessChannel(const std::string& command) {
    int to_child[2], from_child[2];
    if (::pipe(to_child) != 0 || ::pipe(from_child) != 0) throw BackendUnavailable("pipe() failed");
    ::signal(SIGPIPE, SIG_IGN);
    pid_ = ::fork();
    if (pid_ < 0) throw BackendUnavailable("fork() failed");
    if (pid_ == 0) {
      ::dup2(to_child[0], STDIN_FILENO);
      ::dup2(from_child[1], STDOUT_FILENO);
      ::close(to_child[0]);
      ::close(to_child[1]);
      ::close(from_child[0]);
      ::close(from_child[1]);
      ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
      ::_exit(127);
    }
    ::close(to_child[0]);
    ::close(from_child[1]);
    write_fd_ = to_child[1];
    read_fd_ = from_child[0];
    reader_ = std::make_unique<FdLineReader>(read_fd_);
  }
  ~ProcessChannel() override {
    ::close(write_fd_);
    ::close(read_fd_);
    int status = 0;
    ::waitpid(pid_, &status, 0);
  }

  void write_line(const std::string& line) override { write_all(write_fd_, line + "\n"); }
  std::string read_line() override { return reader_->read_line(); }

 private:
  pid_t pid_ = -1;
  int write_fd_ = -1;
  int read_fd_ = -1;
  std::unique_ptr<FdLineReader> reader_;
};

json parse_response(const std::string& line) {
  try {
    return json::parse(line);
  } catch (const json::exception& e) {
    throw BackendUnavailable(std::string("malformed sidecar response: ") + e.what());
  }
}

}  // namespace

std::unique_ptr<LineChannel> open_channel(const SidecarAddress& address) {
  if (address.kind == SidecarAddress::Kind::Stdio) return std::make_unique<ProcessChannel>(address.command);
  return std::make_unique<TcpChannel>(address.host, address.port);
}

SidecarEmbedder::SidecarEmbedder(const SidecarAddress& address) : SidecarEmbedder(open_channel(address)) {}

SidecarEmbedder::SidecarEmbedder(std::unique_ptr<LineChannel> channel) : channel_(std::move(channel)) {
  channel_->write_line(json{{"op", "describe"}}.dump());
  const json r = parse_response(channel_->read_line());
  if (r.contains("error")) throw BackendUnavailable("sidecar describe failed: " + r["error"].get<std::string>());
  try {
    descriptor_.name = r.at("name").get<std::string>();
    descriptor_.dim = r.at("dim").get<std::size_t>();
    descriptor_.supports_text = r.at("supports_text").get<bool>();
  } catch (const json::exception& e) {
    throw BackendUnavailable(std::string("bad describe response: ") + e.what());
  }
  if (descriptor_.dim == 0) throw BackendUnavailable("sidecar declared dim 0");
}

std::vector<EmbeddingVector> SidecarEmbedder::round_trip(const std::vector<std::string>& payloads,
                                                         const std::vector<std::uint64_t>& ids) {
  for (const auto& p : payloads) channel_->write_line(p);
  std::map<std::uint64_t, std::size_t> slot;
  for (std::size_t i = 0; i < ids.size(); ++i) slot[ids[i]] = i;
  std::vector<EmbeddingVector> out(ids.size());
  std::vector<bool> filled(ids.size(), false);
  std::string first_error;
  for (std::size_t received = 0; received < ids.size();) {
    const json r = parse_response(channel_->read_line());
    if (!r.contains("id")) throw BackendUnavailable("sidecar response without id");
    const auto it = slot.find(r["id"].get<std::uint64_t>());
    if (it == slot.end() || filled[it->second]) throw BackendUnavailable("sidecar response with unexpected id");
    filled[it->second] = true;
    ++received;
    if (r.contains("error")) {
      if (first_error.empty()) first_error = r["error"].get<std::string>();
      continue;
    }
    std::vector<float> values = r.at("embedding").get<std::vector<float>>();
    if (values.size() != descriptor_.dim)
      throw BackendUnavailable("sidecar returned dim " + std::to_string(values.size()) + ", declared " +
                               std::to_string(descriptor_.dim));
    out[it->second] = EmbeddingVector::normalized(std::move(values));
  }
  if (!first_error.empty()) throw Error("sidecar error: " + first_error);
  return out;
}

std::vector<EmbeddingVector> SidecarEmbedder::embed_images(std::span<const Frame> frames) {
  std::vector<std::string> payloads;
  std::vector<std::uint64_t> ids;
  std::lock_guard lock(mutex_);
  for (const Frame& f : frames) {
    const std::uint64_t id = next_id_++;
    ids.push_back(id);
    payloads.push_back(json{{"id", id}, {"op", "embed_image"}, {"png_b64", base64_encode(encode_png(f))}}.dump());
  }
  return round_trip(payloads, ids);
}

EmbeddingVector SidecarEmbedder::embed_text(std::string_view prompt) {
  if (!descriptor_.supports_text) throw CapabilityMissing("sidecar model " + descriptor_.name + " has no text tower");
  if (prompt.empty()) throw std::invalid_argument("prompt must not be empty");
  std::lock_guard lock(mutex_);
  const std::uint64_t id = next_id_++;
  return std::move(
      round_trip({json{{"id", id}, {"op", "embed_text"}, {"text", std::string(prompt)}}.dump()}, {id}).front());
}

}  // namespace asal
