#include "stargraph/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

namespace stargraph::io {

namespace {

std::vector<std::vector<double>> read_rows(std::istream& is, const std::string& header, std::size_t columns) {
    std::string line;
    if (!std::getline(is, line)) {
        throw FormatError("csv: empty input");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header) {
        throw FormatError("csv: expected header '" + header + "', got '" + line + "'");
    }
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
                if (used != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw FormatError("csv line " + std::to_string(line_no) + ": bad number '" + cell + "'");
            }
        }
        if (row.size() != columns) {
            throw FormatError("csv line " + std::to_string(line_no) + ": expected " + std::to_string(columns) +
                              " columns");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Checks that `radii` (ascending) are the uniform nodes 0, h, ..., L.
void check_uniform(const std::vector<double>& radii, const char* what) {
    if (radii.size() < 2 || radii.front() != 0.0) {
        throw FormatError(std::string(what) + ": grid must start at 0 with at least two nodes");
    }
    const double L = radii.back();
    const double h = L / static_cast<double>(radii.size() - 1);
    for (std::size_t k = 0; k < radii.size(); ++k) {
        if (std::abs(radii[k] - static_cast<double>(k) * h) > 1e-9 * L) {
            throw FormatError(std::string(what) + ": grid is not uniform");
        }
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_star_csv(std::ostream& os, const StarFunction<double>& f) {
    os << "edge,radius,value\n";
    for (int e = 0; e < f.m(); ++e) {
        for (int k = 0; k < f.points(); ++k) {
            os << (e + 1) << ',' << format_double(f.radius(k)) << ',' << format_double(f(e, k)) << '\n';
        }
    }
}

StarFunction<double> read_star_csv(std::istream& is) {
    const auto rows = read_rows(is, "edge,radius,value", 3);
    std::map<int, std::vector<std::pair<double, double>>> edges;
    for (const auto& r : rows) {
        const int e = static_cast<int>(r[0]);
        if (r[0] != e || e < 1) {
            throw FormatError("star csv: edge numbers must be positive integers");
        }
        edges[e].emplace_back(r[1], r[2]);
    }
    if (edges.empty()) {
        throw FormatError("star csv: no samples");
    }
    const int m = edges.rbegin()->first;
    if (static_cast<int>(edges.size()) != m) {
        throw FormatError("star csv: edges must be numbered 1..m without gaps");
    }
    const std::size_t points = edges.begin()->second.size();
    Matrix<double> values(points, m);
    std::vector<double> radii;
    for (auto& [e, samples] : edges) {
        if (samples.size() != points) {
            throw FormatError("star csv: every edge needs the same number of samples");
        }
        std::sort(samples.begin(), samples.end());
        std::vector<double> r;
        for (std::size_t k = 0; k < points; ++k) {
            r.push_back(samples[k].first);
            values(static_cast<Eigen::Index>(k), e - 1) = samples[k].second;
        }
        check_uniform(r, "star csv");
        if (radii.empty()) radii = r;
    }
    return StarFunction<double>::from_values(StarGraph(m), GridSpec<double>(radii.back(), static_cast<int>(points)),
                                             std::move(values));
}

nlohmann::json star_to_json(const StarFunction<double>& f) {
    nlohmann::json values = nlohmann::json::array();
    for (int e = 0; e < f.m(); ++e) {
        std::vector<double> col(f.points());
        for (int k = 0; k < f.points(); ++k) col[k] = f(e, k);
        values.push_back(col);
    }
    return {{"m", f.m()},
            {"cutoff", f.grid().cutoff},
            {"points_per_edge", f.points()},
            {"values", std::move(values)}};
}

StarFunction<double> star_from_json(const nlohmann::json& j) {
    try {
        const int m = j.at("m").get<int>();
        const GridSpec<double> grid(j.at("cutoff").get<double>(), j.at("points_per_edge").get<int>());
        const auto& values = j.at("values");
        if (!values.is_array() || static_cast<int>(values.size()) != m) {
            throw FormatError("star json: values must hold one array per edge");
        }
        Matrix<double> v(grid.points_per_edge, m);
        for (int e = 0; e < m; ++e) {
            const auto col = values[e].get<std::vector<double>>();
            if (static_cast<int>(col.size()) != grid.points_per_edge) {
                throw FormatError("star json: edge array length differs from points_per_edge");
            }
            for (int k = 0; k < grid.points_per_edge; ++k) v(k, e) = col[k];
        }
        return StarFunction<double>::from_values(StarGraph(m), grid, std::move(v));
    } catch (const nlohmann::json::exception& ex) {
        throw FormatError(std::string("star json: ") + ex.what());
    }
}

void write_line_csv(std::ostream& os, const LineFunction<double>& f) {
    os << "x,value\n";
    for (int k = 0; k < f.grid.size(); ++k) {
        os << format_double(f.grid.x(k)) << ',' << format_double(f.values(k)) << '\n';
    }
}

LineFunction<double> read_line_csv(std::istream& is) {
    auto rows = read_rows(is, "x,value", 2);
    std::sort(rows.begin(), rows.end());
    if (rows.size() < 3 || rows.size() % 2 == 0) {
        throw FormatError("line csv: need an odd number (>= 3) of symmetric nodes");
    }
    const int points_per_side = static_cast<int>(rows.size() / 2) + 1;
    std::vector<double> right;
    for (std::size_t k = rows.size() / 2; k < rows.size(); ++k) right.push_back(rows[k][0]);
    check_uniform(right, "line csv");
    const LineGrid<double> grid(right.back(), points_per_side);
    LineFunction<double> f{grid, Vector<double>(grid.size())};
    for (int k = 0; k < grid.size(); ++k) {
        if (std::abs(rows[k][0] - grid.x(k)) > 1e-9 * grid.half_width) {
            throw FormatError("line csv: grid is not symmetric about 0");
        }
        f.values(k) = rows[k][1];
    }
    return f;
}

void write_kernel_table_csv(std::ostream& os, const TabulatedKernel<double>& table) {
    os << "t,x,y,value\n";
    for (std::size_t j = 0; j < table.times.size(); ++j) {
        for (int k = 0; k < table.grid.size(); ++k) {
            for (int l = 0; l < table.grid.size(); ++l) {
                os << format_double(table.times[j]) << ',' << format_double(table.grid.x(k)) << ','
                   << format_double(table.grid.x(l)) << ',' << format_double(table.tables[j](k, l)) << '\n';
            }
        }
    }
}

TabulatedKernel<double> read_kernel_table_csv(std::istream& is) {
    const auto rows = read_rows(is, "t,x,y,value", 4);
    std::vector<double> times;
    std::vector<double> xs;
    for (const auto& r : rows) {
        if (std::find(times.begin(), times.end(), r[0]) == times.end()) times.push_back(r[0]);
        if (std::find(xs.begin(), xs.end(), r[1]) == xs.end()) xs.push_back(r[1]);
    }
    std::sort(xs.begin(), xs.end());
    if (xs.size() < 3 || xs.size() % 2 == 0) {
        throw FormatError("kernel csv: need an odd number (>= 3) of symmetric nodes");
    }
    const std::size_t n = xs.size();
    if (rows.size() != times.size() * n * n) {
        throw FormatError("kernel csv: table is not a full t x x x y grid");
    }
    std::vector<double> right(xs.begin() + static_cast<std::ptrdiff_t>(n / 2), xs.end());
    check_uniform(right, "kernel csv");
    TabulatedKernel<double> table{times, LineGrid<double>(right.back(), static_cast<int>(n / 2) + 1), {}};
    const double h = table.grid.spacing();
    const double L = table.grid.half_width;
    table.tables.assign(times.size(), Matrix<double>::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
    for (const auto& r : rows) {
        const auto j = static_cast<std::size_t>(std::find(times.begin(), times.end(), r[0]) - times.begin());
        const long k = std::lround((r[1] + L) / h);
        const long l = std::lround((r[2] + L) / h);
        if (l < 0 || l >= static_cast<long>(n)) {
            throw FormatError("kernel csv: y outside the x grid");
        }
        table.tables[j](k, l) = r[3];
    }
    return table;
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw FormatError("cannot open '" + path + "' for writing");
    }
    os << contents;
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw FormatError("cannot open '" + path + "'");
    }
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace stargraph::io
