#pragma once

#include <stdexcept>
#include <string>

namespace esd {

// Base class for all library errors. `Category` separates bad input/usage
// from numerical failures so front ends can map them to distinct exit codes.
class Error : public std::runtime_error {
public:
    enum class Category { Input, Numeric };

    Error(Category c, std::string msg) : std::runtime_error(std::move(msg)), category_(c) {}

    Category category() const noexcept { return category_; }

private:
    Category category_;
};

#define ESD_DEFINE_ERROR(Name, Cat)                                      \
    class Name : public Error {                                          \
    public:                                                              \
        explicit Name(std::string msg)                                   \
            : Error(Error::Category::Cat, #Name ": " + std::move(msg)) {} \
    }

ESD_DEFINE_ERROR(MalformedInput, Input);
ESD_DEFINE_ERROR(DuplicateParameter, Input);
ESD_DEFINE_ERROR(ZeroLengthCurve, Input);
ESD_DEFINE_ERROR(NotPeriodic, Input);
ESD_DEFINE_ERROR(NonUniformPartition, Input);
ESD_DEFINE_ERROR(PartitionMismatch, Input);
ESD_DEFINE_ERROR(EmptyGrid, Input);
ESD_DEFINE_ERROR(LengthMismatch, Input);
ESD_DEFINE_ERROR(NonPositiveWeights, Input);
ESD_DEFINE_ERROR(ItopTooLarge, Input);
ESD_DEFINE_ERROR(WrongCase, Input);
ESD_DEFINE_ERROR(NotClosed, Input);
ESD_DEFINE_ERROR(BrokenPointerChain, Numeric);
ESD_DEFINE_ERROR(SvdFailure, Numeric);
ESD_DEFINE_ERROR(NumericalFailure, Numeric);

#undef ESD_DEFINE_ERROR

} // namespace esd
