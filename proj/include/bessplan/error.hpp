#pragma once

#include <stdexcept>
#include <string>

namespace bessplan {

// Broad failure classes; the CLI maps them onto its exit codes.
enum class ErrorClass { Input, Modeling, Optimization };

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
  ErrorClass error_class() const noexcept { return cls_; }

 private:
  ErrorClass cls_;
};

#define BESSPLAN_DEFINE_ERROR(Name, Class)                                   \
  class Name : public Error {                                                \
   public:                                                                   \
    explicit Name(const std::string& what) : Error(ErrorClass::Class, what) {} \
  };

// Input / schema problems.
BESSPLAN_DEFINE_ERROR(ParseError, Input)
BESSPLAN_DEFINE_ERROR(SchemaError, Input)
BESSPLAN_DEFINE_ERROR(ValidationError, Input)
BESSPLAN_DEFINE_ERROR(ResampleError, Input)
BESSPLAN_DEFINE_ERROR(AlignmentError, Input)
BESSPLAN_DEFINE_ERROR(ConfigError, Input)

// Modeling problems (clustering, fitting, composition).
BESSPLAN_DEFINE_ERROR(DegeneracyError, Modeling)
BESSPLAN_DEFINE_ERROR(CoverageError, Modeling)
BESSPLAN_DEFINE_ERROR(FitError, Modeling)
BESSPLAN_DEFINE_ERROR(ModelRejectedError, Modeling)
BESSPLAN_DEFINE_ERROR(LookupError, Modeling)

// Optimization problems.
BESSPLAN_DEFINE_ERROR(LpConstructionError, Optimization)
BESSPLAN_DEFINE_ERROR(BuildError, Optimization)
BESSPLAN_DEFINE_ERROR(PlanError, Optimization)

#undef BESSPLAN_DEFINE_ERROR

}  // namespace bessplan
