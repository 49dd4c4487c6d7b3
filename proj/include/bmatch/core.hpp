#pragma once

// Node ids, canonical unordered node pairs, and the error types shared by
// every module of the library.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bmatch {

using NodeId = std::uint32_t;

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class BadNodeId : public Error { public: using Error::Error; };
class SelfLoop : public Error { public: using Error::Error; };
class DuplicateEdge : public Error { public: using Error::Error; };
class NonPositiveLength : public Error { public: using Error::Error; };
class Disconnected : public Error { public: using Error::Error; };
class TopologyTooLarge : public Error { public: using Error::Error; };
class AlreadyMatched : public Error { public: using Error::Error; };
class DegreeCapViolation : public Error { public: using Error::Error; };
class NotMatched : public Error { public: using Error::Error; };
class InvariantViolation : public Error { public: using Error::Error; };
class StateSpaceTooLarge : public Error { public: using Error::Error; };
class DegenerateMatrix : public Error { public: using Error::Error; };
class MalformedChunkTrace : public Error { public: using Error::Error; };
class IncompatibleConfigs : public Error { public: using Error::Error; };
class ConfigError : public Error { public: using Error::Error; };

// Input errors that point at a specific line of a text file.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }
private:
    std::size_t line_ = 0;
};

class SelfPair : public Error {
public:
    explicit SelfPair(const std::string& what) : Error(what) {}
    SelfPair(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }
private:
    std::size_t line_ = 0;
};

// An unordered node pair stored canonically as lo < hi.
struct Pair {
    NodeId lo = 0;
    NodeId hi = 0;

    static Pair of(NodeId a, NodeId b) {
        if (a == b)
            throw SelfPair("self pair (" + std::to_string(a) + "," + std::to_string(b) + ")");
        return a < b ? Pair{a, b} : Pair{b, a};
    }

    std::uint64_t key() const { return (std::uint64_t(lo) << 32) | hi; }
    static Pair from_key(std::uint64_t k) {
        return Pair{NodeId(k >> 32), NodeId(k & 0xffffffffULL)};
    }

    bool contains(NodeId w) const { return lo == w || hi == w; }
    NodeId other(NodeId w) const { return lo == w ? hi : lo; }

    auto operator<=>(const Pair&) const = default;
};

inline std::string to_string(Pair p) {
    return "(" + std::to_string(p.lo) + "," + std::to_string(p.hi) + ")";
}

// A finite request sequence.
using Trace = std::vector<Pair>;

}  // namespace bmatch
