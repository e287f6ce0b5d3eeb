#include "bhlab/field_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

namespace bhlab::io {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc())
        throw config_error("cannot parse decimal value: '" + s + "'");
    return v;
}

void write_field_file(const std::string& path, const RealField& f) {
    f.validate();
    std::ofstream out(path);
    if (!out) throw config_error("cannot open field file for writing: " + path);
    out << "# bh-field v1 n=" << f.grid.n_points << " L="
        << format_double(f.grid.length) << "\n";
    for (double v : f.values) out << format_double(v) << "\n";
    if (!out) throw config_error("write failed: " + path);
}

RealField read_field_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open field file: " + path);
    std::string header;
    std::getline(in, header);
    int n = 0;
    double length = 0.0;
    {
        std::istringstream hs(header);
        std::string hash, magic, version, ntok, ltok;
        hs >> hash >> magic >> version >> ntok >> ltok;
        if (hash != "#" || magic != "bh-field" || version != "v1" ||
            ntok.rfind("n=", 0) != 0 || ltok.rfind("L=", 0) != 0)
            throw config_error("bad field file header: " + header);
        n = std::stoi(ntok.substr(2));
        length = parse_double(ltok.substr(2));
    }
    GridSpec grid{n, length};
    grid.validate();
    RealField f = make_field(grid);
    std::string line;
    for (int j = 0; j < n; ++j) {
        if (!std::getline(in, line))
            throw config_error("field file truncated: " + path);
        f.values[j] = parse_double(line);
    }
    f.validate();
    return f;
}

} // namespace bhlab::io
