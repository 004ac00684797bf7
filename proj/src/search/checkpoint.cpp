#include "asal/search/checkpoint.hpp"

#include <cereal/archives/portable_binary.hpp>
#include <cereal/types/string.hpp>
#include <cereal/types/vector.hpp>

#include <fstream>

#include "asal/core/errors.hpp"

namespace asal {

namespace {

constexpr char kMagic[8] = {'A', 'S', 'A', 'L', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

std::ofstream open_out(const std::filesystem::path& path, const std::string& kind) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write checkpoint " + path.string());
  out.write(kMagic, sizeof(kMagic));
  cereal::PortableBinaryOutputArchive ar(out);
  ar(kVersion, kind);
  return out;
}

std::ifstream open_in(const std::filesystem::path& path, const std::string& kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read checkpoint " + path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || !std::equal(magic, magic + 8, kMagic)) throw Error(path.string() + " is not a checkpoint");
  cereal::PortableBinaryInputArchive ar(in);
  std::uint32_t version = 0;
  std::string stored_kind;
  ar(version, stored_kind);
  if (version != kVersion) throw Error("unsupported checkpoint version " + std::to_string(version));
  if (stored_kind != kind) throw Error("checkpoint holds a " + stored_kind + " run, expected " + kind);
  return in;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const TargetCheckpoint& c) {
  auto out = open_out(path, "target");
  cereal::PortableBinaryOutputArchive ar(out);
  ar(c.cma, c.best, c.best_score, c.curve_best, c.curve_mean, c.config_digest);
}

TargetCheckpoint load_target_checkpoint(const std::filesystem::path& path) {
  auto in = open_in(path, "target");
  cereal::PortableBinaryInputArchive ar(in);
  TargetCheckpoint c;
  try {
    ar(c.cma, c.best, c.best_score, c.curve_best, c.curve_mean, c.config_digest);
  } catch (const cereal::Exception& e) {
    throw Error("truncated checkpoint " + path.string() + ": " + e.what());
  }
  return c;
}

void save_checkpoint(const std::filesystem::path& path, const GaCheckpoint& c) {
  auto out = open_out(path, "illuminate");
  cereal::PortableBinaryOutputArchive ar(out);
  const Archive& a = c.state.archive;
  ar(static_cast<std::uint64_t>(a.capacity()), a.next_birth(), static_cast<std::uint64_t>(a.size()));
  for (const auto& m : a.members()) ar(m.theta, m.embedding.values, m.birth);
  ar(c.state.iteration, c.state.attempts, c.state.diverged, c.curve, c.config_digest);
}

GaCheckpoint load_ga_checkpoint(const std::filesystem::path& path) {
  auto in = open_in(path, "illuminate");
  cereal::PortableBinaryInputArchive ar(in);
  GaCheckpoint c;
  try {
    std::uint64_t capacity = 0, next_birth = 0, size = 0;
    ar(capacity, next_birth, size);
    std::vector<ArchiveMember> members(size);
    for (auto& m : members) ar(m.theta, m.embedding.values, m.birth);
    c.state.archive = Archive::restore(capacity, std::move(members), next_birth);
    ar(c.state.iteration, c.state.attempts, c.state.diverged, c.curve, c.config_digest);
  } catch (const cereal::Exception& e) {
    throw Error("truncated checkpoint " + path.string() + ": " + e.what());
  }
  return c;
}

}  // namespace asal
