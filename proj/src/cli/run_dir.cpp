#include "asal/cli/run_dir.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "asal/core/errors.hpp"
#include "asal/core/image.hpp"

namespace asal::cli {

namespace fs = std::filesystem;

RunDir::RunDir(fs::path root, const RunConfig& config) : root_(std::move(root)) {
  fs::create_directories(root_ / "best");
  fs::create_directories(root_ / "frames");
  fs::create_directories(root_ / "report");
  write_text_file(root_ / "config.json", config.resolved.dump(2) + "\n");
}

fs::path RunDir::checkpoint(std::int64_t index) const {
  char name[48];
  std::snprintf(name, sizeof(name), "checkpoint_%06lld.bin", static_cast<long long>(index));
  return root_ / name;
}

void RunDir::write_frames(const Trajectory& traj) const {
  for (const Frame& f : traj.frames) {
    char name[32];
    std::snprintf(name, sizeof(name), "step_%05d.png", f.step_index);
    write_png(root_ / "frames" / name, f);
  }
}

void write_text_file(const fs::path& path, const std::string& contents) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write " + tmp.string());
    out << contents;
    if (!out) throw Error("failed writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

namespace {

Json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

}  // namespace

void write_genome_json(const fs::path& path, const Theta& theta, std::optional<double> score) {
  Json j;
  j["substrate"] = std::string(to_string(theta.substrate));
  j["dim"] = theta.dim();
  if (score) j["score"] = *score;
  j["values"] = theta.values;
  write_text_file(path, j.dump() + "\n");
}

Theta read_genome_json(const fs::path& path) {
  const Json j = read_json(path);
  try {
    Theta t{substrate_from_string(j.at("substrate").get<std::string>()), j.at("values").get<std::vector<double>>()};
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void write_archive_json(const fs::path& path, SubstrateId substrate, const Archive& archive) {
  Json j;
  j["substrate"] = std::string(to_string(substrate));
  j["capacity"] = archive.capacity();
  j["next_birth"] = archive.next_birth();
  j["members"] = Json::array();
  for (const auto& m : archive.members())
    j["members"].push_back({{"birth", m.birth}, {"theta", m.theta}, {"embedding", m.embedding.values}});
  write_text_file(path, j.dump() + "\n");
}

Archive read_archive_json(const fs::path& path, SubstrateId* substrate) {
  const Json j = read_json(path);
  try {
    if (substrate) *substrate = substrate_from_string(j.at("substrate").get<std::string>());
    std::vector<ArchiveMember> members;
    for (const auto& m : j.at("members"))
      members.push_back({m.at("theta").get<Genome>(), EmbeddingVector{m.at("embedding").get<std::vector<float>>()},
                         m.at("birth").get<std::uint64_t>()});
    return Archive::restore(j.at("capacity").get<std::size_t>(), std::move(members),
                            j.at("next_birth").get<std::uint64_t>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

}  // namespace asal::cli
