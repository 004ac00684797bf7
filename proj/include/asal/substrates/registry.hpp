#pragma once

#include <memory>

#include "asal/substrates/boids.hpp"
#include "asal/substrates/lenia.hpp"
#include "asal/substrates/lifelike_ca.hpp"
#include "asal/substrates/nca.hpp"
#include "asal/substrates/particle_life.hpp"

namespace asal {

struct SubstrateSettings {
  CaConfig ca;
  LeniaConfig lenia;
  BoidsConfig boids;
  ParticleLifeConfig particle_life;
  NcaConfig nca;

  void set_render_size(int size);
};

std::unique_ptr<Substrate> make_substrate(SubstrateId id, const SubstrateSettings& settings = {});

}  // namespace asal
