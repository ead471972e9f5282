use std::io::{Read, Write};

use super::{decode, encode, CodeError, CodeId, SymbolIndex};
use crate::bitio::{BitReader, BitWriter, ContainerHeader};

/// Writes a container holding `symbols` coded with `code`. Returns the
/// number of bytes written, header included.
pub fn encode_stream<W: Write>(
    code: CodeId,
    symbols: &[SymbolIndex],
    mut sink: W,
) -> Result<usize, CodeError> {
    let header = ContainerHeader {
        code_id: code.to_byte(),
        count: symbols.len() as u64,
    };
    let mut w = BitWriter::new();
    for a in symbols {
        w.write_bits(&encode(code, a))?;
    }
    let payload = w.into_bytes();
    header.write_to(&mut sink)?;
    sink.write_all(&payload)?;
    Ok(header.to_bytes().len() + payload.len())
}

/// Reads a container written by [`encode_stream`]. Padding after the last
/// element is ignored.
pub fn decode_stream<R: Read>(mut source: R) -> Result<(CodeId, Vec<SymbolIndex>), CodeError> {
    let header = ContainerHeader::read_from(&mut source)?;
    let code = CodeId::from_byte(header.code_id)?;
    if !code.is_prefix_free() {
        return Err(CodeError::NotPrefixFree(code));
    }
    let mut payload = Vec::new();
    source.read_to_end(&mut payload)?;
    let mut r = BitReader::new(&payload);
    let mut out = Vec::new();
    for decoded in 0..header.count {
        match decode(code, &mut r) {
            Ok(a) => out.push(a),
            Err(CodeError::Truncated { .. }) => {
                return Err(CodeError::TruncatedPayload {
                    decoded,
                    expected: header.count,
                })
            }
            Err(e) => return Err(e),
        }
    }
    Ok((code, out))
}
