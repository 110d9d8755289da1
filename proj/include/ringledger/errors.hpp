#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ringledger {

enum class Err {
    DerivedZero,
    UnknownDomainTag,
    HashToElementFailure,
    BadEncoding,
    BadAddress,
    ProfileMismatch,
    DuplicateRingMember,
    SignerNotInRing,
    IndexOutOfRange,
    InvalidSignature,
    DoubleSpend,
    UnknownRingMember,
    UnknownUtxo,
    DuplicateUtxo,
    SpentUtxo,
    InsufficientDecoys,
    DenominationMismatch,
    UnknownContract,
    ContractClosed,
    DuplicateDepositKey,
    NotADepositor,
    DoubleWithdraw,
    DepletedRefused,
    InconsistentKnowledge,
    ParseError,
    IoError,
    Usage,
};

std::string_view err_name(Err e);

class Error : public std::runtime_error {
public:
    Error(Err code, const std::string& what)
        : std::runtime_error(std::string(err_name(code)) + ": " + what), code_(code) {}

    Err code() const { return code_; }

private:
    Err code_;
};

/// Raised by derive_chain style operations that must report where derivation died.
class DerivedZeroError : public Error {
public:
    DerivedZeroError(std::size_t depth, const std::string& what)
        : Error(Err::DerivedZero, what), depth_(depth) {}

    std::size_t depth() const { return depth_; }

private:
    std::size_t depth_;
};

}  // namespace ringledger
