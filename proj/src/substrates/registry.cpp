#include "asal/substrates/registry.hpp"

namespace asal {

void SubstrateSettings::set_render_size(int size) {
  ca.render_size = size;
  lenia.render_size = size;
  boids.render_size = size;
  particle_life.render_size = size;
  nca.render_size = size;
}

std::unique_ptr<Substrate> make_substrate(SubstrateId id, const SubstrateSettings& settings) {
  switch (id) {
    case SubstrateId::LifelikeCa: return std::make_unique<LifelikeCaSubstrate>(settings.ca);
    case SubstrateId::Lenia: return std::make_unique<LeniaSubstrate>(settings.lenia);
    case SubstrateId::Boids: return std::make_unique<BoidsSubstrate>(settings.boids);
    case SubstrateId::ParticleLife: return std::make_unique<ParticleLifeSubstrate>(settings.particle_life);
    case SubstrateId::Nca: return std::make_unique<NcaSubstrate>(settings.nca);
  }
  return nullptr;
}

}  // namespace asal
