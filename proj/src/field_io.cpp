#include "phasespace/field_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "phasespace/errors.hpp"

namespace phasespace {

namespace fs = std::filesystem;

namespace {

std::ofstream open_for_write(const fs::path& path)
{
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    return out;
}

void finish(std::ofstream& out, const fs::path& path)
{
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

PhaseGrid grid_from_header(const nlohmann::json& h)
{
    const auto& b = h.at("bounds");
    const auto& c = h.at("counts");
    return PhaseGrid(b.at("q_max").get<double>(), b.at("p_max").get<double>(), c.at("n_q").get<int>(),
                     c.at("n_p").get<int>());
}

nlohmann::json read_json_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw IoError("malformed JSON in " + path.string() + ": " + e.what());
    }
}

}  // namespace

FileFormat parse_file_format(const std::string& name)
{
    if (name == "csv") return FileFormat::csv;
    if (name == "json") return FileFormat::json;
    throw PreconditionError("unknown format '" + name + "' (expected csv or json)");
}

std::string format_double(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

nlohmann::json field_header(const WignerField& field, const FieldMetadata& meta)
{
    const PhaseGrid& g = field.grid;
    return {
        {"bounds", {{"q_min", -g.q_max()}, {"q_max", g.q_max()}, {"p_min", -g.p_max()}, {"p_max", g.p_max()}}},
        {"counts", {{"n_q", g.n_q()}, {"n_p", g.n_p()}}},
        {"source", meta.source},
        {"trace", meta.trace},
        {"integral", field.integral()},
        {"layout", "row-major, q outer, p inner; samples at cell centres"},
    };
}

void write_json_file(const fs::path& path, const nlohmann::json& j)
{
    auto out = open_for_write(path);
    out << j.dump(2) << '\n';
    finish(out, path);
}

fs::path write_field(const fs::path& dir, const std::string& stem, const WignerField& field,
                     const FieldMetadata& meta, FileFormat format)
{
    const PhaseGrid& g = field.grid;
    if (format == FileFormat::json) {
        nlohmann::json j = field_header(field, meta);
        auto values = nlohmann::json::array();
        for (int i = 0; i < g.n_q(); ++i)
            for (int k = 0; k < g.n_p(); ++k) values.push_back(field.values(i, k));
        j["values"] = std::move(values);
        const fs::path path = dir / (stem + ".json");
        write_json_file(path, j);
        return path;
    }
    const fs::path path = dir / (stem + ".csv");
    auto out = open_for_write(path);
    out << "q,p,value\n";
    std::string line;
    for (int i = 0; i < g.n_q(); ++i) {
        const std::string q = format_double(g.q(i));
        for (int k = 0; k < g.n_p(); ++k) {
            line.clear();
            line += q;
            line += ',';
            line += format_double(g.p(k));
            line += ',';
            line += format_double(field.values(i, k));
            line += '\n';
            out << line;
        }
    }
    finish(out, path);
    write_json_file(dir / (stem + ".header.json"), field_header(field, meta));
    return path;
}

WignerField read_field(const fs::path& data_file)
{
    if (data_file.extension() == ".json") {
        const nlohmann::json j = read_json_file(data_file);
        const PhaseGrid g = grid_from_header(j);
        const auto& values = j.at("values");
        if (values.size() != static_cast<std::size_t>(g.n_q()) * g.n_p())
            throw IoError("value count does not match grid in " + data_file.string());
        Eigen::MatrixXd m(g.n_q(), g.n_p());
        std::size_t idx = 0;
        for (int i = 0; i < g.n_q(); ++i)
            for (int k = 0; k < g.n_p(); ++k) m(i, k) = values[idx++].get<double>();
        return WignerField(g, std::move(m));
    }

    fs::path header_path = data_file;
    header_path.replace_extension(".header.json");
    const PhaseGrid g = grid_from_header(read_json_file(header_path));

    std::ifstream in(data_file, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + data_file.string());
    std::string line;
    if (!std::getline(in, line) || line != "q,p,value") throw IoError("missing q,p,value header in " + data_file.string());
    Eigen::MatrixXd m(g.n_q(), g.n_p());
    const long expected = static_cast<long>(g.n_q()) * g.n_p();
    long row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (row >= expected) throw IoError("too many rows in " + data_file.string());
        const auto last = line.rfind(',');
        if (last == std::string::npos) throw IoError("malformed row in " + data_file.string());
        m(row / g.n_p(), row % g.n_p()) = std::stod(line.substr(last + 1));
        ++row;
    }
    if (row != expected) throw IoError("too few rows in " + data_file.string());
    return WignerField(g, std::move(m));
}

fs::path write_polylines(const fs::path& dir, const std::string& stem, const std::vector<Polyline>& lines,
                         double level, FileFormat format)
{
    if (format == FileFormat::json) {
        auto arr = nlohmann::json::array();
        for (const auto& line : lines) {
            auto pts = nlohmann::json::array();
            for (const auto& p : line.points) pts.push_back({p(0), p(1)});
            arr.push_back({{"closed", line.closed}, {"points", std::move(pts)}});
        }
        const fs::path path = dir / (stem + ".json");
        write_json_file(path, {{"level", level}, {"polylines", std::move(arr)}});
        return path;
    }
    const fs::path path = dir / (stem + ".csv");
    auto out = open_for_write(path);
    out << "# level=" << format_double(level) << '\n' << "polyline,q,p\n";
    for (std::size_t k = 0; k < lines.size(); ++k)
        for (const auto& p : lines[k].points) out << k << ',' << format_double(p(0)) << ',' << format_double(p(1)) << '\n';
    finish(out, path);
    return path;
}

}  // namespace phasespace
