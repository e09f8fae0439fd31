#pragma once

// Line-based file formats (decimal big integers with small headers) and
// flat key = value config parsing. Exactness survives serialization: all
// rationals are written in canonical lowest-terms form.

#include <iosfwd>
#include <map>
#include <string>

#include "pcc/sequences.hpp"

namespace pcc {

void write_block(std::ostream& os, const Block& b);
Block read_block(std::istream& is);

void write_sequence(std::ostream& os, const SequencePrefix& s);
SequencePrefix read_sequence(std::istream& is);

// "key = value" lines, '#' comments, blank lines ignored. Duplicate keys
// are a ConfigError.
std::map<std::string, std::string> parse_kv_file(const std::string& path);
std::map<std::string, std::string> parse_kv_text(std::istream& is,
                                                 const std::string& origin);

}  // namespace pcc
