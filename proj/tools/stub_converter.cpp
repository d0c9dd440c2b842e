// Stand-in for a LaTeX to MathML converter, used by the converter tests.
//   stub_converter identity   copies stdin to stdout
//   stub_converter echo-frac  prints a cross-referenced \frac{a}{b} formula
//   stub_converter fail       writes to stderr and exits 1
//   stub_converter slow       sleeps for five seconds
//   stub_converter garbage    prints text that is not MathML
#include <chrono>
#include <iostream>
#include <iterator>
#include <string>
#include <thread>

namespace {

constexpr const char* kFrac =
    "<math xmlns=\"http://www.w3.org/1998/Math/MathML\"><semantics>\n"
    "  <mfrac id=\"p.2\" xref=\"c.1\">\n"
    "  <mi id=\"p.1\" xref=\"c.2\">a</mi>\n"
    "  <mi id=\"p.3\" xref=\"c.3\">b</mi></mfrac>\n"
    "<annotation-xml encoding=\"MathML-Content\"><apply>\n"
    "  <divide id=\"c.1\" xref=\"p.2\"/>\n"
    "  <ci id=\"c.2\" xref=\"p.1\">a</ci>\n"
    "  <ci id=\"c.3\" xref=\"p.3\">b</ci></apply></annotation-xml>\n"
    "<annotation encoding=\"application/x-tex\">\\frac{a}{b}</annotation>\n"
    "</semantics></math>\n";

}  // namespace

int main(int argc, char** argv) {
    const std::string mode = argc > 1 ? argv[1] : "";
    if (mode == "identity") {
        std::cout << std::string(std::istreambuf_iterator<char>(std::cin), {});
        return 0;
    }
    if (mode == "echo-frac") {
        std::cout << kFrac;
        return 0;
    }
    if (mode == "fail") {
        std::cerr << "stub: conversion failed\n";
        return 1;
    }
    if (mode == "slow") {
        std::this_thread::sleep_for(std::chrono::seconds(5));
        std::cout << kFrac;
        return 0;
    }
    if (mode == "garbage") {
        std::cout << "this is not MathML\n";
        return 0;
    }
    std::cerr << "usage: stub_converter identity|echo-frac|fail|slow|garbage\n";
    return 2;
}
