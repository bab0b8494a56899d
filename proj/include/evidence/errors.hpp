#pragma once

#include <stdexcept>
#include <string>

namespace evidence {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define EVIDENCE_ERROR(Name)                                                     \
    class Name : public Error {                                                  \
    public:                                                                      \
        using Error::Error;                                                      \
    }

EVIDENCE_ERROR(UnknownName);
EVIDENCE_ERROR(InvalidStructure);
EVIDENCE_ERROR(OrthogonalMeasures);
EVIDENCE_ERROR(ZeroSequenceLikelihood);
EVIDENCE_ERROR(EmptySequence);
EVIDENCE_ERROR(UndefinedRatio);
EVIDENCE_ERROR(MoreThanTwoHypotheses);
EVIDENCE_ERROR(ConditionalMismatch);
EVIDENCE_ERROR(DocumentError);
EVIDENCE_ERROR(UnboundVariable);
EVIDENCE_ERROR(QuantifierUnsupported);
EVIDENCE_ERROR(FragmentUnsupported);
EVIDENCE_ERROR(HorizonTooSmall);
EVIDENCE_ERROR(DynamicUnsupported);
EVIDENCE_ERROR(DecodeInconsistent);

#undef EVIDENCE_ERROR

// Lexical, syntactic and scoping errors, with 1-based position.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line, int column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          line_(line), column_(column), bare_(msg) {}
    int line() const { return line_; }
    int column() const { return column_; }
    const std::string& bare_message() const { return bare_; }

private:
    int line_;
    int column_;
    std::string bare_;
};

class UndeclaredName : public ParseError {
public:
    using ParseError::ParseError;
};

} // namespace evidence
