/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef CQLEARN_GUARD_ERROR_HH
#define CQLEARN_GUARD_ERROR_HH 1

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cqlearn
{
    class Error : public std::runtime_error
    {
        public:
            using std::runtime_error::runtime_error;
    };

    /// A relation is used with conflicting arities, or outside the shape an operation supports.
    class SchemaError : public Error
    {
        public:
            using Error::Error;
    };

    class ArityMismatch : public Error
    {
        public:
            using Error::Error;
    };

    /// A distinguished value does not occur in any fact of the instance.
    class IllFormedExample : public Error
    {
        public:
            using Error::Error;
    };

    class InvalidQuery : public Error
    {
        public:
            using Error::Error;
    };

    class NotTreeShaped : public Error
    {
        public:
            using Error::Error;
    };

    /// Fitting and learning need at least one positive example.
    class NoPositiveExamples : public Error
    {
        public:
            using Error::Error;
    };

    class LearnerError : public Error
    {
        public:
            using Error::Error;
    };

    class ParseError : public Error
    {
        private:
            std::size_t _line, _column;

        public:
            ParseError(const std::string & message, std::size_t line, std::size_t column) :
                Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
                _line(line),
                _column(column)
            {
            }

            auto line() const -> std::size_t { return _line; }
            auto column() const -> std::size_t { return _column; }
    };
}

#endif
