// SPDX-License-Identifier: Apache-2.0
//
// JSON containers.
//
// Matrix:       {"rows": R, "cols": C, "data": [[re, im], ...]}  (row-major, R*C pairs)
// Regularizer:  {"type": "zero" | "sq_frobenius" | "l1" | "frob_ball" | "power_ball",
//                "weight": w, "radius": r (frob_ball), "budget": P (power_ball)}
// Instance:     {"format": "dbd-instance", "version": 1, "seed": master seed,
//                "sub_seeds": {...}, "noise_var", "lambda_radar", "lambda_comm",
//                "reg_channel", "reg_signal", "y_radar", "y_comm", "h_comm",
//                "g_nominal" (optional), "truth" (optional: "g_true", "x_true", "delta_g")}
//
// Doubles are written with round-trip precision, so load(save(x)) == x.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "dbd/jrc.hpp"
#include "dbd/matrix.hpp"
#include "dbd/regularizers.hpp"
#include "dbd/errors.hpp"
#include "json.hpp"

namespace dbd::io {

using Json = nlohmann::ordered_json;

Json to_json(const ComplexMatrix& m);
/// `path` names the field in error messages.
ComplexMatrix matrix_from_json(const Json& j, std::string_view path);

Json to_json(const RegularizerSpec& spec);
RegularizerSpec regularizer_from_json(const Json& j, std::string_view path);

Json to_json(const JrcInstance& inst);
JrcInstance instance_from_json(const Json& j);

/// Parses JSON text; malformed input throws ParseError carrying the byte offset.
Json parse(std::string_view text, std::string_view source);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

void save_instance(const JrcInstance& inst, const std::filesystem::path& path);
JrcInstance load_instance(const std::filesystem::path& path);

/// Thrown for unreadable or unwritable files.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dbd::io
