/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef CQLEARN_GUARD_ORACLE_HH
#define CQLEARN_GUARD_ORACLE_HH 1

#include <cqlearn/model.hh>

#include <atomic>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <string>

namespace cqlearn
{
    /// Labels well-formed examples. Counting is race-free; answer() may be called concurrently.
    class MembershipOracle
    {
        private:
            std::atomic<std::size_t> _calls{0};

        protected:
            virtual auto label(const Example & example) -> Label = 0;

        public:
            MembershipOracle() = default;
            MembershipOracle(const MembershipOracle &) = delete;
            auto operator= (const MembershipOracle &) -> MembershipOracle & = delete;
            virtual ~MembershipOracle() = default;

            auto answer(const Example & example) -> Label
            {
                ++_calls;
                return label(example);
            }

            auto call_count() const -> std::size_t { return _calls.load(); }
    };

    /// Answers by evaluating a hidden query.
    class TargetOracle : public MembershipOracle
    {
        private:
            Query _target;

        protected:
            auto label(const Example & example) -> Label override;

        public:
            explicit TargetOracle(Query target);

            auto target() const -> const Query & { return _target; }
    };

    /**
     * Line protocol: each request is an example written as "? (tuple)" followed
     * by its facts, one per line, and a blank line; the reply is a line "+" or
     * "-". The session ends with a line "quit".
     */
    class StreamOracle : public MembershipOracle
    {
        private:
            std::istream & _replies;
            std::ostream & _requests;
            std::mutex _mutex;
            bool _closed = false;

        protected:
            auto label(const Example & example) -> Label override;

        public:
            StreamOracle(std::istream & replies, std::ostream & requests);
            ~StreamOracle() override;

            /// Sends "quit"; later requests throw.
            auto close() -> void;
    };

    /// Serves requests from `requests` with `oracle` until "quit" or end of input.
    /// Returns the number of requests answered. Throws ParseError on a malformed request.
    auto serve_oracle(std::istream & requests, std::ostream & replies, MembershipOracle & oracle) -> std::size_t;

    /// Runs a shell command and speaks the line protocol over its standard streams.
    class ProcessOracle : public MembershipOracle
    {
        private:
            struct Imp;
            std::unique_ptr<Imp> _imp;

        protected:
            auto label(const Example & example) -> Label override;

        public:
            explicit ProcessOracle(const std::string & command);
            ~ProcessOracle() override;
    };
}

#endif
