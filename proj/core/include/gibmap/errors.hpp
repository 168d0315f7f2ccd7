#ifndef GIBMAP_ERRORS_HPP_
#define GIBMAP_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace gibmap {

// Every error carries a stable code string, used verbatim in CLI diagnostics.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

#define GIBMAP_DEFINE_ERROR(NAME)                                      \
  struct NAME : Error {                                                \
    explicit NAME(const std::string& what) : Error(#NAME, what) {}     \
  }

GIBMAP_DEFINE_ERROR(CyclicGraph);
GIBMAP_DEFINE_ERROR(BadDistribution);
GIBMAP_DEFINE_ERROR(NonLaminarConcepts);
GIBMAP_DEFINE_ERROR(BadConcept);
GIBMAP_DEFINE_ERROR(DuplicateName);
GIBMAP_DEFINE_ERROR(UnknownParent);
GIBMAP_DEFINE_ERROR(UnknownVariable);
GIBMAP_DEFINE_ERROR(UnknownValue);
GIBMAP_DEFINE_ERROR(SpanMismatch);
GIBMAP_DEFINE_ERROR(UndefinedConditional);
GIBMAP_DEFINE_ERROR(TooLarge);
GIBMAP_DEFINE_ERROR(NotGib);
GIBMAP_DEFINE_ERROR(NotDeltaGib);
GIBMAP_DEFINE_ERROR(BadSpan);
GIBMAP_DEFINE_ERROR(ImpermissibleSet);
GIBMAP_DEFINE_ERROR(NotSelected);
GIBMAP_DEFINE_ERROR(ParseError);

#undef GIBMAP_DEFINE_ERROR

}  // namespace gibmap

#endif  // GIBMAP_ERRORS_HPP_
