#pragma once

#include <stdexcept>
#include <string>

namespace chibound
{
    /// Bad input: malformed files, violated preconditions, illegal trees.
    class DomainError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    class ParseError : public DomainError
    {
    public:
        using DomainError::DomainError;
    };

    /// An exact oracle ran past its step budget.
    class BudgetExceeded : public std::runtime_error
    {
    public:
        explicit BudgetExceeded(const std::string & what_oracle) :
            std::runtime_error("step budget exceeded in " + what_oracle)
        {
        }
    };

    /// A base-class graph does not satisfy the chi-bound it was declared with.
    class CertificationError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// A proof-side inequality failed at runtime. Reaching this is a bug.
    class InvariantError : public std::logic_error
    {
    public:
        using std::logic_error::logic_error;
    };
}
