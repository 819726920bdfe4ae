#include "mgplan/cli.hpp"

int main(int argc, char** argv)
{
    return mgplan::cli::run(argc, argv);
}
