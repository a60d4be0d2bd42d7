from dotenv import load_dotenv

# Load environment variables before the library reads its defaults
load_dotenv()

from src.cli.app import main  # noqa: E402

if __name__ == "__main__":
    raise SystemExit(main())
