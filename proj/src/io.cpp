#include "shn/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace shn {

nlohmann::json complex_to_json(const FunctionalComplex& complex) {
  nlohmann::json simplices = nlohmann::json::array();
  for (const auto& s : complex.simplices()) {
    simplices.push_back(std::vector<Vertex>(s.vertices().begin(), s.vertices().end()));
  }
  return {{"n_vertices", complex.n_vertices()},
          {"simplices", std::move(simplices)},
          {"weights", std::vector<double>(complex.weights().begin(), complex.weights().end())}};
}

FunctionalComplex complex_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n_vertices") || !j.contains("simplices")) {
    throw std::invalid_argument("complex JSON needs n_vertices and simplices");
  }
  try {
    const auto n = j.at("n_vertices").get<std::size_t>();
    std::vector<Simplex> simplices;
    for (const auto& s : j.at("simplices")) simplices.push_back(Simplex::from_unsorted(s.get<std::vector<Vertex>>()));
    std::vector<double> weights;
    if (j.contains("weights")) weights = j.at("weights").get<std::vector<double>>();
    return FunctionalComplex(n, std::move(simplices), std::move(weights));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed complex JSON: ") + e.what());
  }
}

FunctionalComplex load_complex(const std::filesystem::path& path) {
  try {
    return complex_from_json(nlohmann::json::parse(read_text_file(path)));
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

void save_complex(const std::filesystem::path& path, const FunctionalComplex& complex) {
  write_text_file(path, complex_to_json(complex).dump() + "\n");
}

nlohmann::json state_to_json(const BinaryState& state) {
  std::vector<int> v(state.spins.begin(), state.spins.end());
  return v;
}

BinaryState state_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("state JSON must be an array of +/-1");
  std::vector<double> v;
  for (const auto& x : j) v.push_back(x.get<double>());
  return BinaryState::from_values(v);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace shn
