/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <cqlearn/hom.hh>
#include <cqlearn/oracle.hh>
#include <cqlearn/syntax.hh>

#include <cerrno>
#include <csignal>
#include <istream>
#include <ostream>
#include <streambuf>
#include <string>

#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

using std::size_t;
using std::string;

namespace cqlearn
{
    TargetOracle::TargetOracle(Query target) :
        _target(std::move(target))
    {
    }

    auto TargetOracle::label(const Example & example) -> Label
    {
        return evaluate(_target, example);
    }

    namespace
    {
        auto trimmed(const string & line) -> string
        {
            auto first = line.find_first_not_of(" \t\r");
            if (first == string::npos)
                return "";
            auto last = line.find_last_not_of(" \t\r");
            return line.substr(first, last - first + 1);
        }
    }

    StreamOracle::StreamOracle(std::istream & replies, std::ostream & requests) :
        _replies(replies),
        _requests(requests)
    {
    }

    StreamOracle::~StreamOracle()
    {
        try {
            close();
        }
        catch (...) {
        }
    }

    auto StreamOracle::close() -> void
    {
        std::lock_guard<std::mutex> lock{_mutex};
        if (_closed)
            return;
        _closed = true;
        _requests << "quit\n" << std::flush;
    }

    auto StreamOracle::label(const Example & example) -> Label
    {
        std::lock_guard<std::mutex> lock{_mutex};
        if (_closed)
            throw Error("membership oracle session is closed");

        _requests << to_text(example) << "\n" << std::flush;
        if (! _requests)
            throw Error("membership oracle stopped accepting requests");

        string line;
        while (std::getline(_replies, line)) {
            auto reply = trimmed(line);
            if (reply.empty())
                continue;
            if (reply == "+")
                return Label::positive;
            if (reply == "-")
                return Label::negative;
            throw Error("membership oracle replied '" + reply + "', expected '+' or '-'");
        }
        throw Error("membership oracle closed its output");
    }

    auto serve_oracle(std::istream & requests, std::ostream & replies, MembershipOracle & oracle) -> size_t
    {
        size_t answered = 0;
        string request, line;
        auto flush_request = [&] () {
            auto example = parse_example(request);
            replies << to_string(oracle.answer(example)) << "\n" << std::flush;
            ++answered;
            request.clear();
        };

        while (std::getline(requests, line)) {
            auto t = trimmed(line);
            if (request.empty() && t == "quit")
                return answered;
            if (t.empty()) {
                if (! request.empty())
                    flush_request();
                continue;
            }
            request += line + "\n";
        }
        if (! request.empty())
            flush_request();
        return answered;
    }

    namespace
    {
        class FdBuffer : public std::streambuf
        {
            private:
                int _fd;
                char _buffer[4096];

            protected:
                auto underflow() -> int_type override
                {
                    ssize_t n;
                    do
                        n = ::read(_fd, _buffer, sizeof(_buffer));
                    while (n < 0 && errno == EINTR);
                    if (n <= 0)
                        return traits_type::eof();
                    setg(_buffer, _buffer, _buffer + n);
                    return traits_type::to_int_type(_buffer[0]);
                }

                auto overflow(int_type c) -> int_type override
                {
                    if (sync() != 0)
                        return traits_type::eof();
                    if (! traits_type::eq_int_type(c, traits_type::eof())) {
                        *pptr() = traits_type::to_char_type(c);
                        pbump(1);
                    }
                    return traits_type::not_eof(c);
                }

                auto sync() -> int override
                {
                    char * p = pbase();
                    while (p < pptr()) {
                        auto n = ::write(_fd, p, size_t(pptr() - p));
                        if (n < 0 && errno == EINTR)
                            continue;
                        if (n <= 0)
                            return -1;
                        p += n;
                    }
                    setp(_buffer, _buffer + sizeof(_buffer) - 1);
                    return 0;
                }

            public:
                FdBuffer(int fd, bool output) :
                    _fd(fd)
                {
                    if (output)
                        setp(_buffer, _buffer + sizeof(_buffer) - 1);
                    else
                        setg(_buffer, _buffer, _buffer);
                }

                ~FdBuffer() override
                {
                    if (pbase())
                        sync();
                    ::close(_fd);
                }
        };
    }

    struct ProcessOracle::Imp
    {
        pid_t pid;
        std::unique_ptr<FdBuffer> to_child, from_child;
        std::unique_ptr<std::ostream> requests;
        std::unique_ptr<std::istream> replies;
        std::unique_ptr<StreamOracle> stream;
    };

    ProcessOracle::ProcessOracle(const string & command) :
        _imp(std::make_unique<Imp>())
    {
        int down[2], up[2];
        if (::pipe(down) != 0)
            throw Error("cannot create a pipe for the membership oracle");
        if (::pipe(up) != 0) {
            ::close(down[0]);
            ::close(down[1]);
            throw Error("cannot create a pipe for the membership oracle");
        }

        std::signal(SIGPIPE, SIG_IGN);
        pid_t pid = ::fork();
        if (pid < 0)
            throw Error("cannot start the membership oracle");
        if (pid == 0) {
            ::dup2(down[0], STDIN_FILENO);
            ::dup2(up[1], STDOUT_FILENO);
            ::close(down[0]);
            ::close(down[1]);
            ::close(up[0]);
            ::close(up[1]);
            ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char *>(nullptr));
            ::_exit(127);
        }

        ::close(down[0]);
        ::close(up[1]);
        _imp->pid = pid;
        _imp->to_child = std::make_unique<FdBuffer>(down[1], true);
        _imp->from_child = std::make_unique<FdBuffer>(up[0], false);
        _imp->requests = std::make_unique<std::ostream>(_imp->to_child.get());
        _imp->replies = std::make_unique<std::istream>(_imp->from_child.get());
        _imp->stream = std::make_unique<StreamOracle>(*_imp->replies, *_imp->requests);
    }

    ProcessOracle::~ProcessOracle()
    {
        _imp->stream.reset();
        _imp->requests.reset();
        _imp->to_child.reset();
        _imp->replies.reset();
        _imp->from_child.reset();
        int status = 0;
        ::waitpid(_imp->pid, &status, 0);
    }

    auto ProcessOracle::label(const Example & example) -> Label
    {
        return _imp->stream->answer(example);
    }
}
