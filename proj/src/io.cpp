#include "bilinear/io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace bilinear {

namespace {

using nlohmann::json;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void write_json(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

std::vector<cd> values_from(const json& j, std::size_t expect) {
  std::vector<cd> v;
  v.reserve(expect);
  for (const auto& pair : j.at("values")) v.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
  if (v.size() != expect) throw std::runtime_error("value count does not match header dims");
  return v;
}

json values_to(const std::vector<cd>& v) {
  json arr = json::array();
  for (const cd& z : v) arr.push_back({z.real(), z.imag()});
  return arr;
}

}  // namespace

MapFunction load_map_function(const std::string& path) {
  json j = read_json(path);
  if (j.value("orientation", "V->W") != "V->W")
    throw std::runtime_error("expected a V->W function file");
  SpacePtr sp = make_space(j.at("q").get<int>(), j.at("n").get<int>(), j.at("m").get<int>());
  return MapFunction(sp, values_from(j, sp->size()));
}

void save_map_function(const MapFunction& f, const std::string& path) {
  json j;
  j["q"] = f.sp->q();
  j["n"] = f.sp->dim_v();
  j["m"] = f.sp->dim_w();
  j["orientation"] = "V->W";
  j["values"] = values_to(f.v);
  write_json(j, path);
}

Spectrum load_spectrum(const std::string& path) {
  json j = read_json(path);
  if (j.value("orientation", "W->V") != "W->V")
    throw std::runtime_error("expected a W->V spectrum file");
  SpacePtr sp = make_space(j.at("q").get<int>(), j.at("n").get<int>(), j.at("m").get<int>());
  return Spectrum(sp, values_from(j, sp->size()));
}

void save_spectrum(const Spectrum& s, const std::string& path) {
  json j;
  j["q"] = s.sp->q();
  j["n"] = s.sp->dim_v();
  j["m"] = s.sp->dim_w();
  j["orientation"] = "W->V";
  j["values"] = values_to(s.c);
  write_json(j, path);
}

CubeFunction load_cube_function(const std::string& path) {
  json j = read_json(path);
  CubeSpace sp(j.at("p").get<int>(), j.at("n").get<int>());
  CubeFunction f(sp);
  f.v = values_from(j, sp.size);
  return f;
}

void save_cube_function(const CubeFunction& f, const std::string& path) {
  json j;
  j["p"] = f.sp.p;
  j["n"] = f.sp.n;
  j["values"] = values_to(f.v);
  write_json(j, path);
}

}  // namespace bilinear
