#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>

#include "asal/embedding/embedder.hpp"

namespace asal {

/// "tcp://host:port" or "stdio:<command line>".
struct SidecarAddress {
  enum class Kind { Tcp, Stdio };
  Kind kind = Kind::Tcp;
  std::string host = "127.0.0.1";
  int port = 0;
  std::string command;

  static SidecarAddress parse(const std::string& text);
  std::string to_string() const;
};

/// Newline-delimited JSON transport.
class LineChannel {
 public:
  virtual ~LineChannel() = default;
  /// Both throw BackendUnavailable on transport failure or EOF.
  virtual void write_line(const std::string& line) = 0;
  virtual std::string read_line() = 0;
};

std::unique_ptr<LineChannel> open_channel(const SidecarAddress& address);

/// Client for the embedding sidecar. Requests carry a u64 id; responses are
/// matched by id, so the server may answer a batch in any order.
class SidecarEmbedder final : public Embedder {
 public:
  explicit SidecarEmbedder(std::unique_ptr<LineChannel> channel);
  explicit SidecarEmbedder(const SidecarAddress& address);

  EmbedderDescriptor describe() const override { return descriptor_; }
  std::vector<EmbeddingVector> embed_images(std::span<const Frame> frames) override;
  EmbeddingVector embed_text(std::string_view prompt) override;

 private:
  std::vector<EmbeddingVector> round_trip(const std::vector<std::string>& payloads,
                                          const std::vector<std::uint64_t>& ids);

  std::unique_ptr<LineChannel> channel_;
  EmbedderDescriptor descriptor_;
  std::mutex mutex_;
  std::uint64_t next_id_ = 1;
};

/// Env var holding the sidecar address for the CLI.
inline constexpr const char* kSidecarEnv = "ASAL_SIDECAR";

}  // namespace asal
