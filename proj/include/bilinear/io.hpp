#pragma once

#include <string>

#include "bilinear/cube.hpp"
#include "bilinear/map_space.hpp"

namespace bilinear {

// Function files: {"q":..,"n":..,"m":..,"orientation":"V->W","values":[[re,im],...]}
// with values in the canonical column-major index order.
MapFunction load_map_function(const std::string& path);
void save_map_function(const MapFunction& f, const std::string& path);

// Spectrum files use orientation "W->V" with the dual index order.
Spectrum load_spectrum(const std::string& path);
void save_spectrum(const Spectrum& s, const std::string& path);

// Cube fixtures: {"p":..,"n":..,"values":[[re,im],...]}.
CubeFunction load_cube_function(const std::string& path);
void save_cube_function(const CubeFunction& f, const std::string& path);

}  // namespace bilinear
