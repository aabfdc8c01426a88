#pragma once

#include "cspm/event_model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cspm {

/// A signed ratio (x - y) / min(x, y), or an unbounded marker carrying only a
/// sign when min(x, y) is zero and the other operand is not.
class Balance {
public:
    enum class Kind { Finite, PositiveUnbounded, NegativeUnbounded };

    static Balance finite(double v) { return Balance(Kind::Finite, v); }
    static Balance unbounded(int sign) {
        return Balance(sign > 0 ? Kind::PositiveUnbounded : Kind::NegativeUnbounded, 0.0);
    }

    Kind kind() const noexcept { return kind_; }
    bool is_finite() const noexcept { return kind_ == Kind::Finite; }
    /// Only meaningful for finite balances.
    double value() const noexcept { return value_; }
    /// -1, 0 or +1.
    int sign() const noexcept;

    /// Finite values print in shortest round-trip form; unbounded ones as
    /// "+inf" / "-inf".
    std::string to_string() const;
    static std::optional<Balance> parse(std::string_view s);

    bool operator==(const Balance&) const = default;

private:
    Balance(Kind k, double v) : kind_(k), value_(v) {}
    Kind kind_;
    double value_;
};

/// (x - y) / min(x, y) for non-negative operands.
Balance balance_ratio(double x, double y);

struct ProjectBalances {
    std::string project_id;
    std::size_t inherited = 0;  // n
    std::size_t recruited = 0;  // u
    std::optional<double> inherited_mean_tasks;  // t, absent when n = 0
    std::optional<double> recruited_mean_tasks;  // m, absent when u = 0
    Balance balance_in_recruitment = Balance::finite(0.0);
    Balance balance_in_computing = Balance::finite(0.0);

    bool operator==(const ProjectBalances&) const = default;
};

Balance balance_in_recruitment(const ProjectProfile& project);

/// Uses the per-volunteer task counts stored in the project profile.
Balance balance_in_computing(const ProjectProfile& project);

ProjectBalances compute_project_balances(const ProjectProfile& project);
std::vector<ProjectBalances> compute_project_balances(const Profiles& profiles);

}  // namespace cspm
