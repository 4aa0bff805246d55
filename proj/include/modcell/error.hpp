#ifndef MODCELL_ERROR_HPP
#define MODCELL_ERROR_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace modcell {

/// Raised when an operation's precondition is violated.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One violated condition reported by a validator.
struct Violation {
    std::string condition;  // short tag, e.g. "(iv)" or "leaf-length"
    std::string message;

    bool operator==(const Violation&) const = default;
};

using Violations = std::vector<Violation>;

inline bool has_condition(const Violations& vs, const std::string& tag) {
    for (const auto& v : vs)
        if (v.condition == tag) return true;
    return false;
}

inline std::string describe(const Violations& vs) {
    std::string out;
    for (const auto& v : vs) {
        if (!out.empty()) out += "; ";
        out += v.condition + ": " + v.message;
    }
    return out;
}

}  // namespace modcell

#endif  // MODCELL_ERROR_HPP
