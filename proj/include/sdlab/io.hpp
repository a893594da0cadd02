#pragma once

#include "sdlab/geometry.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sdlab {

inline constexpr std::string_view kVersion = "0.3.0";

// {"vertices": [[x, y], ...]}. Malformed documents raise ParameterError,
// geometric problems ValidationError.
Polygond parse_polygon_json(std::string_view text);
Polygond read_polygon_json(const std::string& path);
std::string polygon_json(const Polygond& p);

// FNV-1a over the counterclockwise vertex list printed with %.17g.
std::uint64_t polygon_hash(const Polygond& p);
std::string hex64(std::uint64_t v);

// %.15g, the number format of every CSV cell.
std::string fmt(double v);

// Ordered "# key: value" lines heading each output file.
using Provenance = std::vector<std::pair<std::string, std::string>>;

void write_provenance(std::ostream& os, const Provenance& prov, std::string_view comment = "# ");

class CsvWriter {
public:
    CsvWriter(std::ostream& os, const Provenance& prov, const std::vector<std::string>& columns);
    void row(const std::vector<std::string>& cells);

private:
    std::ostream& os_;
    std::size_t width_;
};

} // namespace sdlab
