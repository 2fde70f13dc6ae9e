#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "kreinframes/krein.hpp"

namespace kf {

using json = nlohmann::json;

/// {"space": {"p", "q"}, "vectors": [[[re, im], ...], ...]}; one inner list per vector.
struct FrameFile {
  int p = 0;
  int q = 0;
  Mat vectors;  // one column per vector
  std::optional<json> diagnostics;
};

/// {"space": {"p", "q"}, "matrix": [[[re, im], ...], ...]}; one inner list per row.
struct OperatorFile {
  int p = 0;
  int q = 0;
  Mat matrix;
};

json complex_to_json(cplx z);
json matrix_to_json(const Mat& m);  // row-major list of [re, im]

/// Parse errors are thrown as Error(Parse) with the JSON path of the offending field.
cplx complex_from_json(const json& j, const std::string& path);
Mat matrix_from_json(const json& j, const std::string& path);

FrameFile parse_frame_file(const std::string& text);
std::string emit_frame_file(const FrameFile& file);

OperatorFile parse_operator_file(const std::string& text);
std::string emit_operator_file(const OperatorFile& file);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace kf
