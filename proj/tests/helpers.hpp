#ifndef GIBMAP_TESTS_HELPERS_HPP_
#define GIBMAP_TESTS_HELPERS_HPP_

#include <string>

#include "gibmap/json_io.hpp"
#include "gibmap/model.hpp"
#include "gibmap/valueset.hpp"

namespace gibmap::testing {

inline Network fixture(const std::string& name) {
  return validate_network(load_network_file(std::string(GIBMAP_FIXTURES) + "/" + name));
}

// Value set from labels, e.g. set(net, "C", {"t"}).
inline ValueSet set(const Network& net, const std::string& var,
                    std::initializer_list<std::string> labels) {
  int v = net.id_of(var);
  ValueSet s(v, net.domain_size(v));
  for (const auto& label : labels)
    s.add(static_cast<std::size_t>(net.value_index(v, label)));
  return s;
}

}  // namespace gibmap::testing

#endif  // GIBMAP_TESTS_HELPERS_HPP_
