#include "ndlab/io.hpp"

#include "ndlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/core.h>

namespace ndlab {

std::string field_to_csv(const GridField& f)
{
    std::string out = f.spec.dim == 1 ? "x,value\n" : "x,y,value\n";
    out.reserve(out.size() + f.size() * 48);
    for (std::size_t k = 0; k < f.size(); ++k) {
        const Point x = f.node(k);
        if (f.spec.dim == 1)
            out += fmt::format("{:.17g},{:.17g}\n", x[0], f.values[k]);
        else
            out += fmt::format("{:.17g},{:.17g},{:.17g}\n", x[0], x[1], f.values[k]);
    }
    return out;
}

void write_field_csv(const std::string& path, const GridField& f)
{
    write_text(path, field_to_csv(f));
}

GridField field_from_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw DomainError("field CSV is empty");
    int dim = 0;
    if (line.rfind("x,value", 0) == 0) dim = 1;
    else if (line.rfind("x,y,value", 0) == 0) dim = 2;
    else throw DomainError(fmt::format("field CSV header must be 'x,value' or 'x,y,value' (got '{}')", line));

    std::vector<double> xs, ys, values;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        std::istringstream cells(line);
        std::string cell;
        std::vector<double> v;
        while (std::getline(cells, cell, ',')) {
            char* end = nullptr;
            const double d = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str()) throw DomainError(fmt::format("field CSV row {}: '{}' is not a number", row, cell));
            v.push_back(d);
        }
        if (static_cast<int>(v.size()) != dim + 1)
            throw DomainError(fmt::format("field CSV row {}: expected {} columns", row, dim + 1));
        xs.push_back(v[0]);
        if (dim == 2) ys.push_back(v[1]);
        values.push_back(v.back());
    }

    const std::size_t count = values.size();
    const auto n = static_cast<std::size_t>(dim == 1 ? count : std::llround(std::sqrt(static_cast<double>(count))));
    if (n < 2 || (dim == 2 && n * n != count)) throw DomainError("field CSV does not describe a square grid");
    GridSpec spec;
    spec.dim = dim;
    spec.points_per_axis = static_cast<int>(n);
    const double x0 = dim == 1 ? xs.front() : ys.front();
    const double x1 = dim == 1 ? xs[1] : ys[1];
    const double h = x1 - x0;
    if (!(h > 0.0)) throw DomainError("field CSV coordinates must increase along the last axis");
    spec.half_width = 0.5 * h * static_cast<double>(n);
    spec.validate();
    for (std::size_t k = 0; k < count; ++k) {
        const Point expect = dim == 1 ? Point{spec.coord(static_cast<int>(k)), 0.0}
                                      : Point{spec.coord(static_cast<int>(k / n)), spec.coord(static_cast<int>(k % n))};
        const double tol = 1e-9 * std::max(1.0, spec.half_width);
        if (std::abs(xs[k] - expect[0]) > tol || (dim == 2 && std::abs(ys[k] - expect[1]) > tol))
            throw DomainError(fmt::format("field CSV row {} is not on a centred uniform grid", k + 2));
    }
    return GridField(spec, std::move(values));
}

GridField read_field_csv(const std::string& path)
{
    return field_from_csv(read_text(path));
}

void write_text(const std::string& path, const std::string& text)
{
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path));
    out << text;
    if (!out) throw std::runtime_error(fmt::format("write to '{}' failed", path));
}

std::string read_text(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(fmt::format("cannot open '{}'", path));
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string resolve_output_dir(const std::string& configured)
{
    if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
    return configured;
}

} // namespace ndlab
