#include "process.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <stdexcept>
#include <system_error>
#include <thread>
#include <utility>

namespace mathtools::convert::detail {

namespace {

class Fd {
public:
    Fd() = default;
    explicit Fd(int fd) : fd_(fd) {}
    Fd(const Fd&) = delete;
    Fd& operator=(const Fd&) = delete;
    Fd(Fd&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
    Fd& operator=(Fd&& other) noexcept {
        reset();
        fd_ = std::exchange(other.fd_, -1);
        return *this;
    }
    ~Fd() { reset(); }

    int get() const { return fd_; }
    explicit operator bool() const { return fd_ >= 0; }
    void reset() {
        if (fd_ >= 0) ::close(fd_);
        fd_ = -1;
    }

private:
    int fd_ = -1;
};

struct Pipe {
    Fd read;
    Fd write;
};

Pipe make_pipe() {
    int fds[2];
    if (::pipe2(fds, O_CLOEXEC) != 0) throw std::system_error(errno, std::generic_category(), "pipe2");
    return {Fd(fds[0]), Fd(fds[1])};
}

// SIGPIPE is blocked while feeding the child so a tool that exits without
// reading its input yields EPIPE instead of killing us.
class SigpipeBlock {
public:
    SigpipeBlock() {
        sigset_t set;
        sigemptyset(&set);
        sigaddset(&set, SIGPIPE);
        pthread_sigmask(SIG_BLOCK, &set, &old_);
    }
    ~SigpipeBlock() {
        sigset_t set;
        sigemptyset(&set);
        sigaddset(&set, SIGPIPE);
        sigset_t pending;
        sigpending(&pending);
        if (sigismember(&pending, SIGPIPE) && !sigismember(&old_, SIGPIPE)) {
            const timespec zero{0, 0};
            sigtimedwait(&set, nullptr, &zero);
        }
        pthread_sigmask(SIG_SETMASK, &old_, nullptr);
    }

private:
    sigset_t old_;
};

void drain(Fd& fd, std::string& sink) {
    char buf[4096];
    const ssize_t n = ::read(fd.get(), buf, sizeof buf);
    if (n > 0) {
        sink.append(buf, static_cast<std::size_t>(n));
    } else if (n == 0 || (errno != EINTR && errno != EAGAIN)) {
        fd.reset();
    }
}

}  // namespace

std::vector<std::string> split_command(std::string_view command) {
    std::vector<std::string> words;
    std::string word;
    bool in_word = false;
    char quote = 0;
    for (char c : command) {
        if (quote) {
            if (c == quote) quote = 0;
            else word += c;
        } else if (c == '\'' || c == '"') {
            quote = c;
            in_word = true;
        } else if (c == ' ' || c == '\t' || c == '\n') {
            if (in_word) words.push_back(std::move(word));
            word.clear();
            in_word = false;
        } else {
            word += c;
            in_word = true;
        }
    }
    if (quote) throw std::invalid_argument("unterminated quote in command");
    if (in_word) words.push_back(std::move(word));
    return words;
}

ProcessOutcome run_process(const std::vector<std::string>& argv, std::string_view input,
                           std::chrono::milliseconds timeout) {
    if (argv.empty()) throw std::invalid_argument("empty command");
    std::vector<char*> args;
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);

    Pipe in = make_pipe();
    Pipe out = make_pipe();
    Pipe err = make_pipe();
    Pipe exec_status = make_pipe();

    SigpipeBlock sigpipe_block;
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    const pid_t pid = ::fork();
    if (pid < 0) throw std::system_error(errno, std::generic_category(), "fork");
    if (pid == 0) {
        ::setpgid(0, 0);
        ::dup2(in.read.get(), STDIN_FILENO);
        ::dup2(out.write.get(), STDOUT_FILENO);
        ::dup2(err.write.get(), STDERR_FILENO);
        sigset_t none;
        sigemptyset(&none);
        pthread_sigmask(SIG_SETMASK, &none, nullptr);
        ::execvp(args[0], args.data());
        const int code = errno;
        [[maybe_unused]] auto ignored = ::write(exec_status.write.get(), &code, sizeof code);
        ::_exit(127);
    }

    in.read.reset();
    out.write.reset();
    err.write.reset();
    exec_status.write.reset();

    ProcessOutcome outcome;
    int exec_errno = 0;
    if (::read(exec_status.read.get(), &exec_errno, sizeof exec_errno) == sizeof exec_errno) {
        ::waitpid(pid, nullptr, 0);
        outcome.status = ProcessOutcome::Status::not_found;
        outcome.err = std::error_code(exec_errno, std::generic_category()).message();
        return outcome;
    }

    ::fcntl(in.write.get(), F_SETFL, O_NONBLOCK);
    std::size_t written = 0;
    if (input.empty()) in.write.reset();

    bool timed_out = false;
    while (out.read || err.read) {
        const auto now = std::chrono::steady_clock::now();
        if (now >= deadline) {
            timed_out = true;
            break;
        }
        pollfd fds[3];
        nfds_t count = 0;
        int idx_in = -1;
        int idx_out = -1;
        int idx_err = -1;
        if (in.write) {
            idx_in = static_cast<int>(count);
            fds[count++] = {in.write.get(), POLLOUT, 0};
        }
        if (out.read) {
            idx_out = static_cast<int>(count);
            fds[count++] = {out.read.get(), POLLIN, 0};
        }
        if (err.read) {
            idx_err = static_cast<int>(count);
            fds[count++] = {err.read.get(), POLLIN, 0};
        }
        const auto wait = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count() + 1;
        const int ready = ::poll(fds, count, static_cast<int>(wait));
        if (ready < 0) {
            if (errno == EINTR) continue;
            throw std::system_error(errno, std::generic_category(), "poll");
        }
        if (idx_in >= 0 && fds[idx_in].revents) {
            const ssize_t n = ::write(in.write.get(), input.data() + written, input.size() - written);
            if (n > 0) written += static_cast<std::size_t>(n);
            if ((n < 0 && errno != EAGAIN && errno != EINTR) || written == input.size()) in.write.reset();
        }
        if (idx_out >= 0 && fds[idx_out].revents) drain(out.read, outcome.out);
        if (idx_err >= 0 && fds[idx_err].revents) drain(err.read, outcome.err);
    }

    int status = 0;
    while (!timed_out) {
        const pid_t r = ::waitpid(pid, &status, WNOHANG);
        if (r == pid) break;
        if (r < 0 && errno != EINTR) throw std::system_error(errno, std::generic_category(), "waitpid");
        if (std::chrono::steady_clock::now() >= deadline) {
            timed_out = true;
            break;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(1));
    }
    if (timed_out) {
        ::kill(-pid, SIGKILL);
        ::kill(pid, SIGKILL);
        ::waitpid(pid, &status, 0);
        outcome.status = ProcessOutcome::Status::timed_out;
        return outcome;
    }
    if (WIFEXITED(status)) {
        outcome.status = ProcessOutcome::Status::exited;
        outcome.exit_code = WEXITSTATUS(status);
    } else {
        outcome.status = ProcessOutcome::Status::signaled;
        outcome.exit_code = WIFSIGNALED(status) ? 128 + WTERMSIG(status) : -1;
    }
    return outcome;
}

}  // namespace mathtools::convert::detail
