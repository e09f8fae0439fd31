#include "pcc/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "pcc/errors.hpp"

namespace pcc {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

mpz_class parse_z(const std::string& s, const std::string& what) {
    mpz_class z;
    if (s.empty() || mpz_set_str(z.get_mpz_t(), s.c_str(), 10) != 0)
        throw ConfigError("bad integer for " + what + ": '" + s + "'");
    return z;
}

std::string expect_field(std::istream& is, const std::string& key) {
    std::string k, v;
    if (!(is >> k >> v) || k != key)
        throw ConfigError("sequence/block file: expected '" + key + "' field");
    return v;
}

}  // namespace

void write_block(std::ostream& os, const Block& b) {
    os << "pcc-block v1\n";
    os << "level " << b.level << "\n";
    os << "psi_inv " << b.psi_inv << "\n";
    os << "delta " << b.delta.get_str() << "\n";
    os << "count " << b.elements.size() << "\n";
    for (const auto& e : b.elements) os << e.get_str() << "\n";
}

Block read_block(std::istream& is) {
    std::string magic, version;
    is >> magic >> version;
    if (magic != "pcc-block" || version != "v1")
        throw ConfigError("not a pcc-block v1 file");
    Block b;
    b.level = parse_z(expect_field(is, "level"), "level").get_ui();
    b.psi_inv = parse_z(expect_field(is, "psi_inv"), "psi_inv").get_si();
    b.delta = parse_z(expect_field(is, "delta"), "delta");
    unsigned long count = parse_z(expect_field(is, "count"), "count").get_ui();
    b.elements.reserve(count);
    for (unsigned long i = 0; i < count; ++i) {
        std::string line;
        if (!(is >> line)) throw ConfigError("block file: truncated element list");
        b.elements.push_back(parse_z(line, "element"));
    }
    return b;
}

void write_sequence(std::ostream& os, const SequencePrefix& s) {
    os << "pcc-sequence v1\n";
    os << "count " << s.elements.size() << "\n";
    os << "boundaries";
    for (std::size_t b : s.block_boundaries) os << " " << b;
    os << "\n";
    for (const auto& e : s.elements) os << e.get_str() << "\n";
}

SequencePrefix read_sequence(std::istream& is) {
    std::string magic, version;
    is >> magic >> version;
    if (magic != "pcc-sequence" || version != "v1")
        throw ConfigError("not a pcc-sequence v1 file");
    SequencePrefix s;
    unsigned long count = parse_z(expect_field(is, "count"), "count").get_ui();

    std::string key;
    is >> key;
    if (key != "boundaries") throw ConfigError("sequence file: expected boundaries");
    std::string rest;
    std::getline(is, rest);
    std::istringstream bs(rest);
    std::string tok;
    while (bs >> tok)
        s.block_boundaries.push_back(parse_z(tok, "boundary").get_ui());

    s.elements.reserve(count);
    mpz_class prev(-1);
    for (unsigned long i = 0; i < count; ++i) {
        std::string line;
        if (!(is >> line)) throw ConfigError("sequence file: truncated element list");
        mpz_class e = parse_z(line, "element");
        if (e <= prev) throw ConfigError("sequence file: elements not increasing");
        s.elements.push_back(e);
        prev = e;
    }
    for (std::size_t b : s.block_boundaries)
        if (b > s.elements.size())
            throw ConfigError("sequence file: boundary beyond element count");
    return s;
}

std::map<std::string, std::string> parse_kv_text(std::istream& is,
                                                 const std::string& origin) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        if (key.empty()) throw ConfigError(origin + ": empty key");
        if (kv.count(key))
            throw ConfigError(origin + ": duplicate key '" + key + "'");
        kv[key] = val;
    }
    return kv;
}

std::map<std::string, std::string> parse_kv_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    return parse_kv_text(f, path);
}

}  // namespace pcc
