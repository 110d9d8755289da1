#include "ringledger/errors.hpp"

namespace ringledger {

std::string_view err_name(Err e) {
    switch (e) {
        case Err::DerivedZero: return "derived-zero";
        case Err::UnknownDomainTag: return "unknown-domain-tag";
        case Err::HashToElementFailure: return "hash-to-element-failure";
        case Err::BadEncoding: return "bad-encoding";
        case Err::BadAddress: return "bad-address";
        case Err::ProfileMismatch: return "profile-mismatch";
        case Err::DuplicateRingMember: return "duplicate-ring-member";
        case Err::SignerNotInRing: return "signer-not-in-ring";
        case Err::IndexOutOfRange: return "index-out-of-range";
        case Err::InvalidSignature: return "invalid-signature";
        case Err::DoubleSpend: return "double-spend";
        case Err::UnknownRingMember: return "unknown-ring-member";
        case Err::UnknownUtxo: return "unknown-utxo";
        case Err::DuplicateUtxo: return "duplicate-utxo";
        case Err::SpentUtxo: return "spent-utxo";
        case Err::InsufficientDecoys: return "insufficient-decoys";
        case Err::DenominationMismatch: return "denomination-mismatch";
        case Err::UnknownContract: return "unknown-contract";
        case Err::ContractClosed: return "contract-closed";
        case Err::DuplicateDepositKey: return "duplicate-deposit-key";
        case Err::NotADepositor: return "not-a-depositor";
        case Err::DoubleWithdraw: return "double-withdraw";
        case Err::DepletedRefused: return "depleted-refused";
        case Err::InconsistentKnowledge: return "inconsistent-knowledge";
        case Err::ParseError: return "parse-error";
        case Err::IoError: return "io-error";
        case Err::Usage: return "usage";
    }
    return "unknown";
}

}  // namespace ringledger
