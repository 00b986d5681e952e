from virtual_wrt.cli.main import app


def main():
    app()


if __name__ == "__main__":
    main()
