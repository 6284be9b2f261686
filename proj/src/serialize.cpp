#include "snakes/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "snakes/tree_codec.hpp"

namespace snakes {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

void format_value(std::ostream& out, std::int64_t v) { out << v; }
void format_value(std::ostream& out, std::int32_t v) { out << v; }
void format_value(std::ostream& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
}

template <typename T>
void write_indexed_csv(const std::vector<T>& values, const std::string& path) {
    std::ostringstream out;
    out << "index,value\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        out << i << ',';
        format_value(out, values[i]);
        out << '\n';
    }
    write_file_atomic(path, out.str());
}

} // namespace

void write_file_atomic(const std::string& path, const std::string& contents) {
    const std::string tmp = path + ".tmp";
    {
        auto out = open_out(tmp);
        out << contents;
        out.flush();
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("atomic rename failed: " + path);
}

void write_tree_csv(const PlaneTree& tree, const std::string& path) {
    std::ostringstream out;
    out << "degree\n";
    for (const auto d : tree.degrees()) out << d << '\n';
    write_file_atomic(path, out.str());
}

PlaneTree read_tree_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open tree csv: " + path);
    std::vector<std::int32_t> degrees;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "degree") continue;
        degrees.push_back(static_cast<std::int32_t>(std::stol(line)));
    }
    return PlaneTree(std::move(degrees));
}

void write_process_csv(const std::vector<std::int64_t>& values, const std::string& path) {
    write_indexed_csv(values, path);
}
void write_process_csv(const std::vector<std::int32_t>& values, const std::string& path) {
    write_indexed_csv(values, path);
}
void write_process_csv(const std::vector<double>& values, const std::string& path) {
    write_indexed_csv(values, path);
}

std::vector<double> read_process_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open process csv: " + path);
    std::vector<double> values;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (!std::isdigit(static_cast<unsigned char>(line[0])) && line[0] != '-') continue;  // header
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::runtime_error("bad process csv row: " + line);
        values.push_back(std::stod(line.substr(comma + 1)));
    }
    return values;
}

namespace {

void put_i64_le(std::string& out, std::int64_t v) {
    auto u = static_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((u >> (8 * b)) & 0xff));
}

std::int64_t get_i64_le(const char* p) {
    std::uint64_t u = 0;
    for (int b = 0; b < 8; ++b)
        u |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[b])) << (8 * b);
    return static_cast<std::int64_t>(u);
}

} // namespace

void write_i64_dump(const std::vector<std::int64_t>& values, const std::string& path) {
    std::string out;
    out.reserve(8 * (values.size() + 1));
    put_i64_le(out, static_cast<std::int64_t>(values.size()));
    for (const auto v : values) put_i64_le(out, v);
    write_file_atomic(path, out);
}

std::vector<std::int64_t> read_i64_dump(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open dump: " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() < 8) throw std::runtime_error("truncated dump: " + path);
    const auto count = static_cast<std::size_t>(get_i64_le(bytes.data()));
    if (bytes.size() != 8 * (count + 1)) throw std::runtime_error("corrupt dump: " + path);
    std::vector<std::int64_t> values(count);
    for (std::size_t i = 0; i < count; ++i) values[i] = get_i64_le(bytes.data() + 8 * (i + 1));
    return values;
}

void write_snake_csv(const SpatialSnake& snake, const std::string& path) {
    const auto h = height(*snake.tree);
    std::ostringstream out;
    out << "lex_index,depth,position\n";
    for (std::size_t j = 0; j < snake.position.size(); ++j) {
        out << j << ',' << h[j] << ',';
        format_value(out, snake.position[j]);
        out << '\n';
    }
    write_file_atomic(path, out.str());
}

void write_snake_contour_csv(const SpatialSnake& snake, const std::string& path) {
    const auto c = contour(*snake.tree);
    std::ostringstream out;
    out << "contour_index,depth,position\n";
    for (std::size_t t = 0; t < snake.contour_position.size(); ++t) {
        out << t << ',' << c[t] << ',';
        format_value(out, snake.contour_position[t]);
        out << '\n';
    }
    write_file_atomic(path, out.str());
}

} // namespace snakes
