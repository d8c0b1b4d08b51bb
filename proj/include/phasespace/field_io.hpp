#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "phasespace/contour.hpp"
#include "phasespace/phase_space.hpp"

namespace phasespace {

enum class FileFormat { csv, json };

FileFormat parse_file_format(const std::string& name);

struct FieldMetadata {
    std::string source;
    double trace = 1.0;
};

/// Grid bounds, counts, source description, trace and integral.
nlohmann::json field_header(const WignerField& field, const FieldMetadata& meta);

/// csv: `<stem>.csv` with columns q,p,value (row-major, q outer) plus a
/// `<stem>.header.json` sidecar. json: a single `<stem>.json` holding the header
/// and a row-major "values" array. Returns the path of the data file.
std::filesystem::path write_field(const std::filesystem::path& dir, const std::string& stem,
                                  const WignerField& field, const FieldMetadata& meta, FileFormat format);

/// Inverse of write_field; the format is taken from the extension.
WignerField read_field(const std::filesystem::path& data_file);

/// csv: columns polyline,q,p. json: {"level", "polylines": [{"closed", "points"}]}.
std::filesystem::path write_polylines(const std::filesystem::path& dir, const std::string& stem,
                                      const std::vector<Polyline>& lines, double level, FileFormat format);

/// Writes `j` pretty-printed with a trailing newline. Throws IoError.
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

/// %.17g rendering used by every text writer.
std::string format_double(double x);

}  // namespace phasespace
