import logging
from pathlib import Path
from typing import Any, Dict, Optional

from src.algebra.field import Field
from src.bundles.monad import Monad, deserialize, serialize
from src.tools.ErrorAndStatus import CommonErrorCodes, MonadFileErrorCode, SegreError, StatusCodes

logger = logging.getLogger(__name__)


def load_monad_file(path: str, expected_field: Optional[Field] = None) -> Dict[str, Any]:
    """
    Load and validate a segre-monad-v1 JSON file.

    Args:
        path (str): Path of the monad file.
        expected_field (Field, optional): Field the caller works over; a file
            over a different field is rejected.

    Returns:
        Dictionary containing:
            - status: StatusCodes.SUCCESS or StatusCodes.ERROR
            - error_code: Code identifying the specific error
            - message: Descriptive message about the operation
            - monad: The parsed Monad if successful, None otherwise
            - offset: Byte offset of a JSON syntax error, when known
    """
    output = {
        "status": StatusCodes.ERROR,
        "error_code": None,
        "message": "",
        "monad": None,
        "offset": None,
    }

    try:
        logger.info(f"Reading monad file: {path}")
        data = Path(path).read_bytes()
        monad = deserialize(data, expected_field)

        output["status"] = StatusCodes.SUCCESS
        output["monad"] = monad
        output["message"] = (f"Loaded {monad.shape.tag.value} monad with c2={monad.c2} "
                             f"over {monad.field} ({len(data)} bytes)")
        logger.info(output["message"])
        return output

    except FileNotFoundError:
        output["error_code"] = MonadFileErrorCode.FILE_NOT_FOUND
        output["message"] = f"Monad file not found: {path}"
        logger.error(output["message"])
        return output

    except SegreError as e:
        output["error_code"] = e.code
        output["message"] = f"Error parsing monad file: {str(e)}"
        output["offset"] = getattr(e, "offset", None)
        logger.error(output["message"])
        return output

    except OSError as e:
        output["error_code"] = CommonErrorCodes.TOOL_ERROR
        output["message"] = f"Error reading monad file: {str(e)}"
        logger.error(output["message"])
        return output


def save_monad_file(monad: Monad, path: str) -> Dict[str, Any]:
    """Write the canonical serialization of a monad; same status dictionary as `load_monad_file`."""
    output = {"status": StatusCodes.ERROR, "error_code": None, "message": ""}
    try:
        data = serialize(monad)
        Path(path).write_bytes(data)
        output["status"] = StatusCodes.SUCCESS
        output["message"] = f"Wrote {len(data)} bytes to {path}"
        logger.info(output["message"])
    except OSError as e:
        output["error_code"] = CommonErrorCodes.TOOL_ERROR
        output["message"] = f"Error writing monad file: {str(e)}"
        logger.error(output["message"])
    return output
