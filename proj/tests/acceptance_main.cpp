#include "bergman/acceptance.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>

int main(int argc, char** argv)
{
    bergman::AcceptanceOptions opt;
    opt.exe = BERGMAN_LAB_EXE;
    opt.work_dir = (std::filesystem::current_path() / "acceptance_work").string();
    std::filesystem::create_directories(opt.work_dir);
    for (int i = 1; i < argc; ++i)
        opt.only.push_back(std::atoi(argv[i]));
    bool failed = false;
    bergman::run_acceptance(opt, [&](const bergman::CriterionResult& r) {
        std::cout << bergman::format_result(r) << std::endl;
        failed = failed || r.status == "FAIL";
    });
    return failed ? 1 : 0;
}
