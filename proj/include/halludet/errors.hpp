#pragma once

#include <stdexcept>
#include <string>

namespace halludet {

// Exit-code mapping for the CLI: usage 1, data 2, stage 3.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad input data: missing files, malformed records, unmapped labels,
// invalid descriptors or configs.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// A pipeline stage failed at run time (training diverged, translator down).
class StageError : public std::runtime_error {
public:
    explicit StageError(const std::string& msg) : std::runtime_error(msg) {}
};

// A raw label with no label_map entry. Never downgraded to a skip, even in
// lenient ingestion: silently dropping a label class skews the corpus.
class UnmappedLabelError : public DataError {
public:
    explicit UnmappedLabelError(const std::string& msg) : DataError(msg) {}
};

}  // namespace halludet
