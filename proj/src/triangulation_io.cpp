#include "qcp/triangulation_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <unistd.h>

namespace qcp {

namespace {

[[noreturn]] void parse_fail(int line, const std::string& what) {
    std::ostringstream os;
    os << "line " << line << ": " << what;
    throw Error(ErrorKind::Parse, os.str());
}

struct Tokenizer {
    std::istringstream in;
    int line;

    explicit Tokenizer(const std::string& text, int line_no) : in(text), line(line_no) {}

    std::string word(const char* what) {
        std::string w;
        if (!(in >> w)) {
            parse_fail(line, std::string("expected ") + what);
        }
        return w;
    }

    long integer(const char* what) {
        const std::string w = word(what);
        try {
            std::size_t pos = 0;
            const long v = std::stol(w, &pos);
            if (pos != w.size()) {
                throw std::invalid_argument(w);
            }
            return v;
        } catch (const std::exception&) {
            parse_fail(line, std::string("expected integer ") + what + ", got '" + w + "'");
        }
    }

    double real(const char* what) {
        const std::string w = word(what);
        try {
            std::size_t pos = 0;
            const double v = std::stod(w, &pos);
            if (pos != w.size()) {
                throw std::invalid_argument(w);
            }
            return v;
        } catch (const std::exception&) {
            parse_fail(line, std::string("expected number ") + what + ", got '" + w + "'");
        }
    }

    void done() {
        std::string extra;
        if (in >> extra) {
            parse_fail(line, "unexpected trailing token '" + extra + "'");
        }
    }
};

} // namespace

Triangulation parse_triangulation(std::string_view text) {
    DeltaComplex c;
    bool have_vertices = false;
    std::vector<std::pair<int, double>> phi_entries;
    std::vector<int> phi_lines;

    std::istringstream stream{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(stream, raw)) {
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string::npos) {
            raw.erase(hash);
        }
        if (raw.find_first_not_of(" \t\r\n") == std::string::npos) {
            continue;
        }
        Tokenizer tok(raw, line_no);
        const std::string kind = tok.word("keyword");
        if (kind == "vertices") {
            if (have_vertices) {
                parse_fail(line_no, "duplicate 'vertices' line");
            }
            const long n = tok.integer("vertex count");
            if (n < 0) {
                parse_fail(line_no, "vertex count must be non-negative");
            }
            c.vertex_count = static_cast<int>(n);
            have_vertices = true;
        } else if (kind == "edge") {
            if (!have_vertices) {
                parse_fail(line_no, "'edge' before 'vertices'");
            }
            const long id = tok.integer("edge id");
            if (id != c.num_edges()) {
                parse_fail(line_no, "edge ids must be 0-based and contiguous; expected " +
                                        std::to_string(c.num_edges()));
            }
            EdgeRec rec;
            rec.d0 = static_cast<int>(tok.integer("d0 vertex"));
            rec.d1 = static_cast<int>(tok.integer("d1 vertex"));
            c.edges.push_back(rec);
        } else if (kind == "triangle") {
            if (!have_vertices) {
                parse_fail(line_no, "'triangle' before 'vertices'");
            }
            const long id = tok.integer("triangle id");
            if (id != c.num_triangles()) {
                parse_fail(line_no, "triangle ids must be 0-based and contiguous; expected " +
                                        std::to_string(c.num_triangles()));
            }
            TriangleRec rec;
            rec.d0 = static_cast<int>(tok.integer("d0 edge"));
            rec.d1 = static_cast<int>(tok.integer("d1 edge"));
            rec.d2 = static_cast<int>(tok.integer("d2 edge"));
            c.triangles.push_back(rec);
        } else if (kind == "phi") {
            const int e = static_cast<int>(tok.integer("edge id"));
            const double value = tok.real("angle in radians");
            phi_entries.emplace_back(e, value);
            phi_lines.push_back(line_no);
        } else {
            parse_fail(line_no, "unknown keyword '" + kind + "'");
        }
        tok.done();
    }
    if (!have_vertices) {
        parse_fail(line_no == 0 ? 1 : line_no, "missing 'vertices' line");
    }

    validate(c);

    Triangulation result;
    result.complex = std::move(c);
    if (!phi_entries.empty()) {
        std::vector<double> phi(result.complex.num_edges(),
                                std::numeric_limits<double>::quiet_NaN());
        for (std::size_t i = 0; i < phi_entries.size(); ++i) {
            const auto [e, value] = phi_entries[i];
            if (e < 0 || e >= result.complex.num_edges()) {
                parse_fail(phi_lines[i], "phi references missing edge id " + std::to_string(e));
            }
            if (!std::isnan(phi[e])) {
                parse_fail(phi_lines[i], "duplicate phi for edge " + std::to_string(e));
            }
            if (!(value >= 0.0 && value < std::numbers::pi)) {
                parse_fail(phi_lines[i], "phi must lie in [0, pi)");
            }
            phi[e] = value;
        }
        for (double& v : phi) {
            if (std::isnan(v)) {
                v = 0.0; // unspecified edges default to tangency
            }
        }
        result.phi = std::move(phi);
    }
    return result;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for reading");
    }
    std::ostringstream os;
    os << in.rdbuf();
    if (in.bad()) {
        throw Error(ErrorKind::Io, "error while reading '" + path.string() + "'");
    }
    return os.str();
}

Triangulation load_triangulation(const std::filesystem::path& path) {
    return parse_triangulation(read_file(path));
}

std::string format_triangulation(const DeltaComplex& c, const std::vector<double>* phi,
                                 std::string_view header_comment) {
    std::ostringstream os;
    os.precision(17);
    if (!header_comment.empty()) {
        os << "# " << header_comment << '\n';
    }
    os << "vertices " << c.num_vertices() << '\n';
    for (int e = 0; e < c.num_edges(); ++e) {
        os << "edge " << e << ' ' << c.edges[e].d0 << ' ' << c.edges[e].d1 << '\n';
    }
    for (int t = 0; t < c.num_triangles(); ++t) {
        os << "triangle " << t << ' ' << c.triangles[t].d0 << ' ' << c.triangles[t].d1 << ' '
           << c.triangles[t].d2 << '\n';
    }
    if (phi != nullptr) {
        for (int e = 0; e < c.num_edges(); ++e) {
            os << "phi " << e << ' ' << (*phi)[e] << '\n';
        }
    }
    return os.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path dir = path.parent_path();
    if (dir.empty()) {
        dir = ".";
    }
    const auto tmp = dir / (path.filename().string() + ".tmp" + std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(ErrorKind::Io, "cannot open '" + tmp.string() + "' for writing");
        }
        out << content;
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw Error(ErrorKind::Io, "error while writing '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error(ErrorKind::Io, "cannot rename temp file onto '" + path.string() + "'");
    }
}

std::vector<double> parse_vertex_values(std::string_view text, int vertex_count) {
    std::vector<double> values(vertex_count, std::numeric_limits<double>::quiet_NaN());
    std::istringstream stream{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(stream, raw)) {
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string::npos) {
            raw.erase(hash);
        }
        if (raw.find_first_not_of(" \t\r\n") == std::string::npos) {
            continue;
        }
        Tokenizer tok(raw, line_no);
        const long v = tok.integer("vertex id");
        const double value = tok.real("value");
        tok.done();
        if (v < 0 || v >= vertex_count) {
            parse_fail(line_no, "vertex id " + std::to_string(v) + " out of range");
        }
        if (!std::isnan(values[v])) {
            parse_fail(line_no, "duplicate value for vertex " + std::to_string(v));
        }
        values[v] = value;
    }
    for (int v = 0; v < vertex_count; ++v) {
        if (std::isnan(values[v])) {
            throw Error(ErrorKind::Parse, "missing value for vertex " + std::to_string(v));
        }
    }
    return values;
}

std::vector<double> load_vertex_values(const std::filesystem::path& path, int vertex_count) {
    return parse_vertex_values(read_file(path), vertex_count);
}

std::string format_vertex_values(const std::vector<double>& values) {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t v = 0; v < values.size(); ++v) {
        os << v << ' ' << values[v] << '\n';
    }
    return os.str();
}

} // namespace qcp
