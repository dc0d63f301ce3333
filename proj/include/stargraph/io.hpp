#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "stargraph/extension.hpp"
#include "stargraph/kernels.hpp"
#include "stargraph/star_graph.hpp"

namespace stargraph::io {

/// Shortest-safe round-trip formatting: 17 significant digits.
std::string format_double(double v);

/// CSV with header `edge,radius,value`; edges are numbered from 1.
void write_star_csv(std::ostream& os, const StarFunction<double>& f);
StarFunction<double> read_star_csv(std::istream& is);

/// {m, cutoff, points_per_edge, values: [[edge 1 ...], ...]}
nlohmann::json star_to_json(const StarFunction<double>& f);
StarFunction<double> star_from_json(const nlohmann::json& j);

/// CSV with header `x,value` on the symmetric grid.
void write_line_csv(std::ostream& os, const LineFunction<double>& f);
LineFunction<double> read_line_csv(std::istream& is);

/// CSV with header `t,x,y,value`.
void write_kernel_table_csv(std::ostream& os, const TabulatedKernel<double>& table);
TabulatedKernel<double> read_kernel_table_csv(std::istream& is);

void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace stargraph::io
