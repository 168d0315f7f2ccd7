#ifndef GIBMAP_JSON_IO_HPP_
#define GIBMAP_JSON_IO_HPP_

#include <string>

#include "gibmap/model.hpp"

namespace gibmap {

// Strict parser for the network file format: unknown fields are rejected,
// "p" entries omitted from a row default to 0. ParseError carries a
// position- or path-annotated message.
RawNetwork parse_network_json(const std::string& text);
RawNetwork load_network_file(const std::string& path);

std::string network_to_json(const RawNetwork& raw);

}  // namespace gibmap

#endif  // GIBMAP_JSON_IO_HPP_
