#include "sdlab/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace sdlab {

Polygond parse_polygon_json(std::string_view text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParameterError(std::string("malformed polygon JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("vertices") || !doc["vertices"].is_array())
        throw ParameterError("polygon JSON needs a \"vertices\" array");
    std::vector<Point2d> pts;
    for (const auto& v : doc["vertices"]) {
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            throw ParameterError("each vertex must be a pair of numbers [x, y]");
        pts.emplace_back(v[0].get<double>(), v[1].get<double>());
    }
    return Polygond(std::move(pts));
}

Polygond read_polygon_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParameterError("cannot read polygon file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_polygon_json(buf.str());
}

std::string polygon_json(const Polygond& p)
{
    nlohmann::json doc;
    doc["vertices"] = nlohmann::json::array();
    for (const auto& v : p.vertices())
        doc["vertices"].push_back({v.x(), v.y()});
    return doc.dump();
}

std::uint64_t polygon_hash(const Polygond& p)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    char buf[64];
    for (const auto& v : p.vertices()) {
        const int n = std::snprintf(buf, sizeof buf, "%.17g,%.17g;", v.x(), v.y());
        for (int i = 0; i < n; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ull;
        }
    }
    return h;
}

std::string hex64(std::uint64_t v)
{
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

void write_provenance(std::ostream& os, const Provenance& prov, std::string_view comment)
{
    for (const auto& [key, value] : prov)
        os << comment << key << ": " << value << "\n";
}

CsvWriter::CsvWriter(std::ostream& os, const Provenance& prov, const std::vector<std::string>& columns)
    : os_(os), width_(columns.size())
{
    write_provenance(os_, prov);
    for (std::size_t i = 0; i < columns.size(); ++i)
        os_ << (i ? "," : "") << columns[i];
    os_ << "\n";
}

void CsvWriter::row(const std::vector<std::string>& cells)
{
    if (cells.size() != width_)
        throw ParameterError("CSV row has " + std::to_string(cells.size()) + " cells, expected " +
                             std::to_string(width_));
    for (std::size_t i = 0; i < cells.size(); ++i)
        os_ << (i ? "," : "") << cells[i];
    os_ << "\n";
}

} // namespace sdlab
