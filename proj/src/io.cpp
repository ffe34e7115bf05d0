// SPDX-License-Identifier: Apache-2.0

#include "dbd/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dbd/sim.hpp"

namespace dbd::io {

namespace {

std::string join(std::string_view path, std::string_view key) {
  return path.empty() ? std::string(key) : std::string(path) + "." + std::string(key);
}

const Json& require(const Json& j, std::string_view path, const char* key) {
  if (!j.is_object()) throw ConfigError(std::string(path) + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(join(path, key) + ": missing field");
  return *it;
}

double number(const Json& j, std::string_view path) {
  if (!j.is_number()) throw ConfigError(std::string(path) + ": expected a number");
  return j.get<double>();
}

std::size_t count(const Json& j, std::string_view path) {
  if (!j.is_number_unsigned()) {
    throw ConfigError(std::string(path) + ": expected a non-negative integer");
  }
  return j.get<std::size_t>();
}

}  // namespace

Json to_json(const ComplexMatrix& m) {
  Json data = Json::array();
  for (const cplx& v : m.data()) data.push_back(Json::array({v.real(), v.imag()}));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

ComplexMatrix matrix_from_json(const Json& j, std::string_view path) {
  const std::size_t rows = count(require(j, path, "rows"), join(path, "rows"));
  const std::size_t cols = count(require(j, path, "cols"), join(path, "cols"));
  const Json& data = require(j, path, "data");
  const std::string data_path = join(path, "data");
  if (!data.is_array() || data.size() != rows * cols) {
    throw ConfigError(data_path + ": expected " + std::to_string(rows * cols) + " [re, im] pairs");
  }
  std::vector<cplx> entries;
  entries.reserve(data.size());
  for (std::size_t k = 0; k < data.size(); ++k) {
    const Json& e = data[k];
    const std::string ep = data_path + "[" + std::to_string(k) + "]";
    if (!e.is_array() || e.size() != 2) throw ConfigError(ep + ": expected [re, im]");
    const double re = number(e[0], ep);
    const double im = number(e[1], ep);
    if (!std::isfinite(re) || !std::isfinite(im)) throw ConfigError(ep + ": non-finite entry");
    entries.emplace_back(re, im);
  }
  return ComplexMatrix(rows, cols, std::move(entries));
}

Json to_json(const RegularizerSpec& spec) {
  Json j{{"type", spec.name()}, {"weight", spec.weight}};
  if (const auto* b = std::get_if<reg::FrobeniusBall>(&spec.form)) j["radius"] = b->radius;
  if (const auto* p = std::get_if<reg::PowerBall>(&spec.form)) j["budget"] = p->budget;
  return j;
}

RegularizerSpec regularizer_from_json(const Json& j, std::string_view path) {
  if (!j.is_object()) throw ConfigError(std::string(path) + ": expected an object");
  const Json& type_j = require(j, path, "type");
  if (!type_j.is_string()) throw ConfigError(join(path, "type") + ": expected a string");
  const std::string type = type_j.get<std::string>();
  const double weight = j.contains("weight") ? number(j["weight"], join(path, "weight")) : 0.0;

  std::vector<std::string> allowed = {"type", "weight"};
  RegularizerSpec spec;
  if (type == "zero") {
    spec = RegularizerSpec::zero();
  } else if (type == "sq_frobenius") {
    spec = RegularizerSpec::squared_frobenius(weight);
  } else if (type == "l1") {
    spec = RegularizerSpec::l1(weight);
  } else if (type == "frob_ball") {
    spec = RegularizerSpec::frobenius_ball(
        number(require(j, path, "radius"), join(path, "radius")),
        j.contains("weight") ? weight : 1.0);
    allowed.push_back("radius");
  } else if (type == "power_ball") {
    spec = RegularizerSpec::power_ball(
        number(require(j, path, "budget"), join(path, "budget")),
        j.contains("weight") ? weight : 1.0);
    allowed.push_back("budget");
  } else {
    throw ConfigError(join(path, "type") + ": unknown regularizer '" + type +
                      "' (expected zero, sq_frobenius, l1, frob_ball or power_ball)");
  }
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(join(path, key) + ": unknown field for regularizer '" + type + "'");
    }
  }
  try {
    spec.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(path) + ": " + e.what());
  }
  return spec;
}

Json to_json(const JrcInstance& inst) {
  Json sub = Json::object();
  const std::pair<const char*, SeedStream> streams[] = {
      {"scene", SeedStream::Scene},         {"steering", SeedStream::Steering},
      {"delta_g", SeedStream::DeltaG},      {"comm_channel", SeedStream::CommChannel},
      {"signal", SeedStream::Signal},       {"radar_noise", SeedStream::RadarNoise},
      {"comm_noise", SeedStream::CommNoise}, {"solver_init", SeedStream::SolverInit},
      {"gaussian_nominal", SeedStream::GaussianNominal},
  };
  for (const auto& [name, stream] : streams) sub[name] = sub_seed(inst.seed, stream);

  Json j{
      {"format", "dbd-instance"},
      {"version", 1},
      {"seed", inst.seed},
      {"sub_seeds", std::move(sub)},
      {"noise_var", inst.noise_var},
      {"lambda_radar", inst.lambda_radar},
      {"lambda_comm", inst.lambda_comm},
      {"reg_channel", to_json(inst.reg_channel)},
      {"reg_signal", to_json(inst.reg_signal)},
      {"y_radar", to_json(inst.y_radar)},
      {"y_comm", to_json(inst.y_comm)},
      {"h_comm", to_json(inst.h_comm)},
  };
  if (inst.g_nominal) j["g_nominal"] = to_json(*inst.g_nominal);
  if (inst.truth) {
    Json t{{"g_true", to_json(inst.truth->g_true)}, {"x_true", to_json(inst.truth->x_true)}};
    if (inst.truth->delta_g) t["delta_g"] = to_json(*inst.truth->delta_g);
    j["truth"] = std::move(t);
  }
  return j;
}

JrcInstance instance_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("instance: expected a JSON object");
  const Json& format = require(j, "", "format");
  if (format != "dbd-instance") throw ConfigError("format: expected \"dbd-instance\"");
  if (require(j, "", "version") != 1) throw ConfigError("version: unsupported instance version");

  JrcInstance inst;
  const Json& seed = require(j, "", "seed");
  if (!seed.is_number_unsigned()) throw ConfigError("seed: expected a non-negative integer");
  inst.seed = seed.get<std::uint64_t>();
  inst.noise_var = number(require(j, "", "noise_var"), "noise_var");
  inst.lambda_radar = number(require(j, "", "lambda_radar"), "lambda_radar");
  inst.lambda_comm = number(require(j, "", "lambda_comm"), "lambda_comm");
  inst.reg_channel = regularizer_from_json(require(j, "", "reg_channel"), "reg_channel");
  inst.reg_signal = regularizer_from_json(require(j, "", "reg_signal"), "reg_signal");
  inst.y_radar = matrix_from_json(require(j, "", "y_radar"), "y_radar");
  inst.y_comm = matrix_from_json(require(j, "", "y_comm"), "y_comm");
  inst.h_comm = matrix_from_json(require(j, "", "h_comm"), "h_comm");
  if (j.contains("g_nominal")) inst.g_nominal = matrix_from_json(j["g_nominal"], "g_nominal");
  if (j.contains("truth")) {
    const Json& t = j["truth"];
    GroundTruth truth{matrix_from_json(require(t, "truth", "g_true"), "truth.g_true"),
                      matrix_from_json(require(t, "truth", "x_true"), "truth.x_true"),
                      std::nullopt};
    if (t.contains("delta_g")) truth.delta_g = matrix_from_json(t["delta_g"], "truth.delta_g");
    inst.truth = std::move(truth);
  }
  inst.validate();
  return inst;
}

Json parse(std::string_view text, std::string_view source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.byte, std::string(source) + ": " + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path.string());
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("error writing " + path.string());
}

void save_instance(const JrcInstance& inst, const std::filesystem::path& path) {
  write_file(path, to_json(inst).dump(1) + "\n");
}

JrcInstance load_instance(const std::filesystem::path& path) {
  return instance_from_json(parse(read_file(path), path.string()));
}

}  // namespace dbd::io
