#include "stnn/cli.hpp"

int main(int argc, char** argv)
{
    return stnn::cli::run(argc, argv);
}
