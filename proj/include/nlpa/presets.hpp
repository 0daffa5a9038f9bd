#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlpa/dd.hpp"
#include "nlpa/linear_map.hpp"
#include "nlpa/surface.hpp"

namespace nlpa {

// Self-similar interval exchange on the base segment gamma_0, which starts at
// `anchor` and runs along +u. Letters are numbered from 0; `top` lists them in
// domain order and `bottom` in image order.
struct ExactIETData {
  std::vector<int> top, bottom;
  std::vector<dd> lengths;
  std::vector<dd> heights;
  dd base_length;
  std::string loop;  // Rauzy loop word in 't' / 'b'
};

struct Preset {
  std::string id;
  std::shared_ptr<const TranslationSurface> surface;
  LinearPA raw;
  LinearPA phi;  // stabilized power
  ExactIETData iet;
  Vec2 anchor;   // site of the perturbation, start of gamma_0
  std::vector<std::vector<long long>> matrix;

  nlohmann::json to_json() const;
};

using IntMatrix2 = std::array<std::array<long long, 2>, 2>;

Preset build_torus(const IntMatrix2& m);
Preset build_genus2_preset();
// "torus" or "genus2"
Preset preset_by_name(const std::string& name);

// One elementary Rauzy move on a permutation pair; kind 't' or 'b'.
void rauzy_move(std::vector<int>& top, std::vector<int>& bottom, char kind);
// Product of the elementary matrices along a word (lengths before = B * lengths after).
std::vector<std::vector<long long>> rauzy_loop_matrix(std::vector<int> top, std::vector<int> bottom,
                                                      const std::string& word);

}  // namespace nlpa
