#include "errors.hpp"

#include "units.hpp"

namespace dragfree
{

const char* to_string(ErrorKind kind) noexcept
{
    switch (kind)
    {
    case ErrorKind::Usage: return "usage";
    case ErrorKind::Syntax: return "syntax";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Range: return "range";
    case ErrorKind::Singular: return "singular";
    case ErrorKind::DegenerateCoupling: return "degenerate-coupling";
    case ErrorKind::Io: return "io";
    }
    return "unknown";
}

std::string_view to_string(Units units) noexcept
{
    return units == Units::SI ? "si" : "natural";
}

}  // namespace dragfree
